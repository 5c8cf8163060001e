from typing import Any, Dict, Optional
from autodiff.checkpoint import CheckpointError, load_checkpoint
from autodiff.optim import ParameterStore
from config.schemas import DecoderConfig
from config.settings import log
from decoders.bp import BPDecoder, DecodeConfig
from decoders.hyper import HyperDecoder
from decoders.tanner import TannerGraph
from decoders.uncoded import UncodedDecoder


class DecoderFactory:
    @staticmethod
    def create_decoder(
        config: DecoderConfig,
        graph: TannerGraph,
        store: Optional[ParameterStore] = None,
        require_checkpoint: bool = False,
    ):
        """
        Cria um decodificador da variante pedida

        Args:
            config: configuração do decodificador
            graph: grafo de Tanner do código
            store: parâmetros já carregados (tem precedência sobre config.checkpoint)
            require_checkpoint: variantes aprendidas sem parâmetros viram erro

        Raises:
            CheckpointError: checkpoint ausente, de outro código ou de outra variante
            ValueError: variante não suportada
        """
        if store is None and config.checkpoint:
            store, header = load_checkpoint(config.checkpoint)
            DecoderFactory.check_header(header, config, graph)
        elif store is None and require_checkpoint and config.learned:
            raise CheckpointError(f"A variante '{config.variant}' exige um checkpoint")

        if config.variant == "uncoded":
            return UncodedDecoder(graph)

        decode_config = DecodeConfig(**config.model_dump(include=set(DecodeConfig.model_fields)))

        if config.variant in ("plain", "weighted"):
            return BPDecoder(graph, decode_config, store)

        elif config.variant in ("hyper", "hyper_damped"):
            return HyperDecoder(
                graph,
                decode_config,
                store,
                x0_mode=config.x0_mode,
                theta_scope=config.theta_scope,
                seed=config.seed,
                f_hidden=config.f_hidden,
                g_hidden=config.g_hidden,
                f_layers=config.f_layers,
                g_layers=config.g_layers,
            )

        else:
            raise ValueError(
                f"Variante '{config.variant}' não suportada. Use 'plain', 'weighted', 'hyper', 'hyper_damped' ou 'uncoded'"
            )

    @staticmethod
    def check_header(header: Dict[str, Any], config: DecoderConfig, graph: TannerGraph):
        """Confere se o checkpoint foi treinado para este código e família de variante"""
        code = header.get("code", {})
        if code and (code.get("name") != graph.H.name or code.get("n") != graph.num_vars):
            raise CheckpointError(
                f"Checkpoint treinado em {code.get('name')} (n={code.get('n')}), "
                f"mas o código atual é {graph.H.name} (n={graph.num_vars})"
            )
        trained = header.get("variant")
        hyper_family = {"hyper", "hyper_damped"}
        if trained and trained != config.variant and not {trained, config.variant} <= hyper_family:
            raise CheckpointError(f"Checkpoint da variante '{trained}' usado como '{config.variant}'")
        log("BP", f"✓ Checkpoint compatível ({trained}, passo {header.get('step')})")

    @staticmethod
    def get_variant_info(config: DecoderConfig) -> dict:
        """Retorna um resumo da variante configurada"""
        info = {
            "variant": config.variant,
            "iterations": config.iterations,
            "check_update": config.check_update,
            "q": config.q,
            "learned": config.learned,
            "checkpoint": config.checkpoint,
        }
        if config.variant in ("hyper", "hyper_damped"):
            info.update({
                "f": {"hidden": config.f_hidden, "layers": config.f_layers},
                "g": {"hidden": config.g_hidden, "layers": config.g_layers},
                "x0_mode": config.x0_mode,
                "theta_scope": config.theta_scope,
            })
        return info


