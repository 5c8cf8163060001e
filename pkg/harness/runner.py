"""
Motor de experimentos usado pela CLI e pela API HTTP

Cada método devolve {"success": True, "result": ...} ou {"success": False, "error": ...};
as exceções viram mensagens amigáveis em OutputGuardrails.handle_error_gracefully.
"""
import os
from typing import Any, Callable, Dict, List, Optional
import numpy as np
from codes.code_loader import CodeLoader, code_loader
from config.decoder_factory import DecoderFactory
from config.schemas import CodeRef, DecoderConfig, ExperimentConfig, experiment_to_toml
from config.settings import log, settings
from decoders.guardrails import OutputGuardrails
from decoders.tanner import build
from gnn.graphs import dump_dataset, load_dataset, make_synthetic_dataset
from gnn.trainer import accuracy, build_model, train_gin
from harness.compare import compare
from harness.gradcheck import run_gradcheck
from harness.stability import run_stability
from harness.sweep import run_sweep
from training.trainer import train
from utils.report_writer import report_writer


def with_seed(config: ExperimentConfig, seed: Optional[int]) -> ExperimentConfig:
    """Aplica a semente da linha de comando a todas as seções do experimento"""
    if seed is None:
        return config
    return config.model_copy(update={
        "decoder": config.decoder.model_copy(update={"seed": seed}),
        "train": config.train.model_copy(update={"seeds": [seed]}),
        "sweep": config.sweep.model_copy(update={"seed": seed}),
        "gin": config.gin.model_copy(update={"seed": seed}),
    })


def split_paths(path: str) -> Dict[str, str]:
    """'data/ciclos.txt' -> {'train': 'data/ciclos.train.txt', 'test': 'data/ciclos.test.txt'}"""
    stem, ext = os.path.splitext(path)
    return {part: f"{stem}.{part}{ext or '.txt'}" for part in ("train", "test")}


class ExperimentRunner:
    """
    Executa os experimentos descritos por um ExperimentConfig

    Args:
        loader: banco de códigos (default: o banco incluído)
        results_path: pasta padrão dos CSVs quando `out` não é dado
    """

    def __init__(self, loader: Optional[CodeLoader] = None, results_path: Optional[str] = None):
        self.loader = loader or code_loader
        self.results_path = results_path or settings.RESULTS_PATH
        self.output_guardrails = OutputGuardrails()

    def _run(self, context: str, action: Callable[[], Any]) -> Dict[str, Any]:
        try:
            return {"success": True, "result": action()}
        except Exception as e:
            log("RUNNER", f"✗ {context}: {type(e).__name__}: {e}")
            return {"success": False, "error": self.output_guardrails.handle_error_gracefully(e, context)}

    def _out(self, out: Optional[str], name: str) -> str:
        return out or os.path.join(self.results_path, f"{name}.csv")

    # --- códigos ---

    def list_codes(self) -> Dict[str, Any]:
        return self._run("codes list", self.loader.list_codes)

    # --- decodificação avulsa ---

    def decode(self, llr, code: Optional[Dict[str, Any]] = None, decoder: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        """
        Decodifica um frame ou lote de LLRs

        Args:
            llr: lista (n,) ou (B, n)
            code: campos de CodeRef
            decoder: campos de DecoderConfig
        """
        def action():
            ref = CodeRef(**(code or {}))
            config = DecoderConfig(**(decoder or {}))
            H = self.loader.load(ref.name, form=ref.form)
            dec = DecoderFactory.create_decoder(config, build(H))
            result = dec.decode(np.asarray(llr, dtype=np.float64))
            return {
                "code": H.name,
                "decoder": DecoderFactory.get_variant_info(config),
                "bits": np.asarray(result.bits).tolist(),
                "marginals": np.asarray(result.marginals).tolist(),
                "converged": np.asarray(result.converged).tolist(),
                "iterations": np.asarray(result.iterations).tolist(),
            }

        return self._run("decode", action)

    # --- experimentos do decodificador ---

    def sweep(self, config: ExperimentConfig, out: Optional[str] = None, threads: Optional[int] = None, write: bool = True) -> Dict[str, Any]:
        def action():
            result = run_sweep(config.sweep, config.decoder, config.code, self.loader, threads)
            rows = result.rows()
            payload = {"metadata": result.metadata(), "rows": rows}
            if write:
                payload["csv"] = report_writer.write_csv(
                    self._out(out, "sweep"), rows, result.metadata(), experiment_to_toml(config)
                )
            return payload

        return self._run("sweep", action)

    def train(self, config: ExperimentConfig, out: Optional[str] = None) -> Dict[str, Any]:
        """Treina a variante aprendida com cada semente de train.seeds"""
        def action():
            variant = config.train.variant or config.decoder.variant
            if variant not in ("weighted", "hyper", "hyper_damped"):
                raise ValueError(f"A variante '{variant}' não tem parâmetros para treinar")
            train_config = config.train
            if train_config.checkpoint_path is None:
                train_config = train_config.model_copy(update={"checkpoint_path": settings.CHECKPOINT_PATH})
            H = self.loader.load(config.code.name, form=config.code.form)
            graph = build(H)

            path = self._out(out, "train")
            stem, _ = os.path.splitext(path)
            summaries: List[Dict[str, Any]] = []
            for seed in train_config.seeds:
                decoder = config.decoder.model_copy(update={"variant": variant, "seed": seed, "early_stop": False})
                report = train(DecoderFactory.create_decoder(decoder, graph), train_config, seed=seed)
                suffix = "" if len(train_config.seeds) == 1 else f".seed{seed}"
                metadata = {"code": H.name, "variant": variant, "seed": seed, "diverged": report.diverged}
                csv_path = report_writer.write_csv(f"{stem}{suffix}.csv", report.trace_rows(), metadata, experiment_to_toml(config))
                json_path = report_writer.write_json(f"{stem}{suffix}.json", report.to_dict())
                summaries.append({
                    "seed": seed,
                    "diverged": report.diverged,
                    "best_ber": report.best_ber,
                    "final_damping": report.final_damping,
                    "checkpoint": report.checkpoint,
                    "csv": csv_path,
                    "json": json_path,
                })
            return {"code": H.name, "variant": variant, "runs": summaries}

        return self._run("train", action)

    def compare(self, config: ExperimentConfig, out: Optional[str] = None) -> Dict[str, Any]:
        def action():
            result = compare(config.compare.a, config.compare.b, config.sweep, config.code, config.compare.frames, self.loader)
            rows = result.rows()
            csv_path = report_writer.write_csv(self._out(out, "compare"), rows, result.metadata(), experiment_to_toml(config))
            return {"metadata": result.metadata(), "rows": rows, "csv": csv_path}

        return self._run("compare", action)

    def gradcheck(self, num_cases: int = 100, seed: int = 0, out: Optional[str] = None) -> Dict[str, Any]:
        def action():
            summary = run_gradcheck(num_cases, seed)
            payload = {
                "passed": summary.passed,
                "cases": len(summary.cases),
                "failures": [c.to_row() for c in summary.failures],
                "by_kind": summary.by_kind(),
            }
            if out:
                payload["csv"] = report_writer.write_csv(out, summary.rows(), {"cases": num_cases, "seed": seed})
            return payload

        return self._run("gradcheck", action)

    def stability(self, config: ExperimentConfig, out: Optional[str] = None) -> Dict[str, Any]:
        def action():
            result = run_stability(config.stability, config.train, config.decoder, config.code, self.loader)
            rows = result.rows()
            csv_path = report_writer.write_csv(self._out(out, "stability"), rows, result.metadata(), experiment_to_toml(config))
            return {"divergences": result.divergences(), "rows": rows, "csv": csv_path}

        return self._run("stability", action)

    # --- GNN ---

    def _gin_dataset(self, config: ExperimentConfig):
        gin = config.gin
        if gin.dataset:
            paths = split_paths(gin.dataset)
            if os.path.exists(paths["train"]):
                _, train_set = load_dataset(paths["train"])
                _, test_set = load_dataset(paths["test"])
                return train_set, test_set
        train_set, test_set = make_synthetic_dataset(gin.family, (gin.min_nodes, gin.max_nodes), gin.seed, gin.num_graphs)
        if gin.dataset:
            paths = split_paths(gin.dataset)
            dump_dataset(train_set, paths["train"], gin.family)
            dump_dataset(test_set, paths["test"], gin.family)
        return train_set, test_set

    def gin_train(self, config: ExperimentConfig, out: Optional[str] = None) -> Dict[str, Any]:
        def action():
            train_set, test_set = self._gin_dataset(config)
            gin = config.gin
            if gin.checkpoint is None:
                gin = gin.model_copy(update={"checkpoint": os.path.join(settings.CHECKPOINT_PATH, f"{gin.model}_seed{gin.seed}.npz")})
            model = build_model(gin, feature_dim=train_set[0].feature_dim)
            report = train_gin(model, train_set, gin, test_set)
            rows = [
                {"step": i + 1, "loss": loss, "damping": report.damping[i] if i < len(report.damping) else ""}
                for i, loss in enumerate(report.losses)
            ]
            metadata = {
                "model": gin.model,
                "family": gin.family,
                "train_accuracy": report.train_accuracy,
                "test_accuracy": report.test_accuracy,
                "diverged": report.diverged,
            }
            csv_path = report_writer.write_csv(self._out(out, "gin_train"), rows, metadata, experiment_to_toml(config))
            return {**metadata, "checkpoint": report.checkpoint, "csv": csv_path}

        return self._run("gin-train", action)

    def gin_eval(self, config: ExperimentConfig) -> Dict[str, Any]:
        def action():
            train_set, test_set = self._gin_dataset(config)
            model = build_model(config.gin, feature_dim=train_set[0].feature_dim, require_checkpoint=True)
            return {
                "model": model.kind,
                "train_accuracy": accuracy(model, train_set),
                "test_accuracy": accuracy(model, test_set),
            }

        return self._run("gin-eval", action)
