"""
Schemas dos arquivos de experimento (TOML)

Gramática: tabelas de topo [code], [decoder], [train], [sweep], [compare], [stability]
e [gin]; as chaves são os nomes dos campos abaixo. Chaves desconhecidas são rejeitadas.
"""
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Dict, List, Literal, Optional, Tuple
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from config.settings import settings
from decoders.bp import DecodeConfig

LearnedVariant = Literal["weighted", "hyper", "hyper_damped"]
DecoderVariant = Literal["plain", "weighted", "hyper", "hyper_damped", "uncoded"]
GinFamily = Literal["cycle-vs-path", "triangle-count-parity", "density-pair"]
GinKind = Literal["gin", "hyper_gin", "hyper_gin_undamped"]


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


def _check_range(value: Tuple[float, float]) -> Tuple[float, float]:
    low, high = value
    if low > high:
        raise ValueError(f"Intervalo inválido: low={low} > high={high}")
    return value


class CodeRef(StrictModel):
    """Referência a um código do banco (nome, rótulo ou caminho)"""

    name: str = Field(default="HAMMING_7_4", description="Nome do arquivo, rótulo ou caminho")
    form: Literal["bank", "systematic"] = Field(
        default="bank", description="'bank' usa H como está; 'systematic' remove linhas dependentes"
    )


class DecoderConfig(DecodeConfig):
    """Configuração completa de um decodificador (variante, larguras de f/g, checkpoint)"""

    model_config = ConfigDict(extra="forbid")

    variant: DecoderVariant = Field(default="plain")
    # larguras de f e g
    f_hidden: int = Field(default=32, ge=1)
    f_layers: int = Field(default=4, ge=1)
    g_hidden: int = Field(default=16, ge=1)
    g_layers: int = Field(default=2, ge=1)
    x0_mode: Literal["half", "pair"] = Field(default="half")
    theta_scope: Literal["edge", "iteration"] = Field(default="edge")
    seed: int = Field(default=0, description="Semente da inicialização de θ_f e c")
    checkpoint: Optional[str] = Field(default=None, description="Checkpoint .npz com os parâmetros aprendidos")

    @property
    def learned(self) -> bool:
        return self.variant in ("weighted", "hyper", "hyper_damped")


class TrainConfig(StrictModel):
    """Hiperparâmetros de treino (defaults vêm de settings)"""

    lr: float = Field(default_factory=lambda: settings.LEARNING_RATE, gt=0)
    batch_size: int = Field(default_factory=lambda: settings.BATCH_SIZE, ge=1)
    steps: int = Field(default=1000, ge=0)
    snr_range_db: Tuple[float, float] = Field(default_factory=lambda: tuple(settings.SNR_RANGE_DB))
    seeds: List[int] = Field(default_factory=lambda: [settings.SEED], min_length=1)
    gradient_clip_norm: Optional[float] = Field(default=None, gt=0)
    variant: Optional[LearnedVariant] = Field(default=None, description="Sobrescreve decoder.variant")
    eval_every: int = Field(default=100, ge=1)
    validation_frames: int = Field(default=1000, ge=1)
    loss_normalization: Literal["bit", "frame"] = Field(default="bit")
    beta1: float = Field(default=0.9, ge=0, lt=1)
    beta2: float = Field(default=0.999, ge=0, lt=1)
    eps: float = Field(default=1e-8, gt=0)
    checkpoint_path: Optional[str] = Field(default=None)

    @field_validator("snr_range_db")
    @classmethod
    def _low_le_high(cls, v: Tuple[float, float]) -> Tuple[float, float]:
        return _check_range(v)


class SweepConfig(StrictModel):
    """Varredura BER x Eb/N0"""

    code: Optional[CodeRef] = Field(default=None, description="Se ausente, usa a tabela [code]")
    variants: List[DecoderVariant] = Field(default_factory=lambda: ["plain"], min_length=1)
    snr_points_db: List[float] = Field(default_factory=lambda: [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0], min_length=1)
    max_frames: int = Field(default_factory=lambda: settings.MAX_FRAMES, ge=1)
    min_bit_errors: int = Field(default_factory=lambda: settings.MIN_BIT_ERRORS, ge=1)
    frames_per_batch: int = Field(default_factory=lambda: settings.FRAMES_PER_BATCH, ge=1)
    seed: int = Field(default_factory=lambda: settings.SEED)
    iterations: Optional[int] = Field(default=None, ge=1, description="Se ausente, usa decoder.iterations")
    checkpoints: Dict[str, str] = Field(default_factory=dict, description="variante -> checkpoint")
    include_uncoded: bool = Field(default=True, description="Coluna analítica Q(√(2·Eb/N0))")
    allow_untrained: bool = Field(default=False, description="Permite variantes aprendidas sem checkpoint")
    noise_sigma: Optional[float] = Field(default=None, gt=0, description="Sigma fixo (modo de injeção, ex. 1e-6)")

    @field_validator("snr_points_db")
    @classmethod
    def _strictly_increasing(cls, v: List[float]) -> List[float]:
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("snr_points_db deve ser estritamente crescente")
        return v


class CompareConfig(StrictModel):
    """Comparação pareada entre dois decodificadores"""

    a: DecoderConfig = Field(default_factory=DecoderConfig)
    b: DecoderConfig = Field(default_factory=DecoderConfig)
    frames: int = Field(default=10000, ge=1, description="Frames pareados por ponto de SNR")


class StabilityConfig(StrictModel):
    """Experimento de estabilidade: treinos repetidos com e sem amortecimento"""

    variants: List[Literal["hyper", "hyper_damped"]] = Field(default_factory=lambda: ["hyper_damped", "hyper"], min_length=1)
    seeds: List[int] = Field(default_factory=lambda: [0, 1, 2, 3, 4], min_length=1)
    steps: int = Field(default=2000, ge=0)


class GinConfig(StrictModel):
    """GIN / hyper-GIN em datasets sintéticos"""

    family: GinFamily = Field(default="cycle-vs-path")
    model: GinKind = Field(default="hyper_gin")
    min_nodes: int = Field(default=6, ge=3)
    max_nodes: int = Field(default=12, ge=3)
    num_graphs: int = Field(default=200, ge=2)
    hidden: int = Field(default=16, ge=1)
    iterations: int = Field(default=3, ge=1, description="K")
    f_hidden: int = Field(default=16, ge=1)
    g_hidden: int = Field(default=16, ge=1)
    learn_eps: bool = Field(default=True)
    lr: float = Field(default=1e-2, gt=0)
    steps: int = Field(default=300, ge=0)
    batch_size: int = Field(default=32, ge=1)
    gradient_clip_norm: Optional[float] = Field(default=5.0, gt=0)
    seed: int = Field(default=0)
    dataset: Optional[str] = Field(default=None, description="Arquivo do dataset (gerado se ausente)")
    checkpoint: Optional[str] = Field(default=None)

    @model_validator(mode="after")
    def _sizes(self):
        if self.min_nodes > self.max_nodes:
            raise ValueError("min_nodes deve ser <= max_nodes")
        return self


class ExperimentConfig(StrictModel):
    """Arquivo de experimento completo"""

    code: CodeRef = Field(default_factory=CodeRef)
    decoder: DecoderConfig = Field(default_factory=DecoderConfig)
    train: TrainConfig = Field(default_factory=TrainConfig)
    sweep: SweepConfig = Field(default_factory=SweepConfig)
    compare: CompareConfig = Field(default_factory=CompareConfig)
    stability: StabilityConfig = Field(default_factory=StabilityConfig)
    gin: GinConfig = Field(default_factory=GinConfig)

    @property
    def sweep_code(self) -> CodeRef:
        return self.sweep.code or self.code


def parse_experiment(text: str) -> ExperimentConfig:
    """
    Lê um experimento a partir de texto TOML

    Raises:
        tomllib.TOMLDecodeError: TOML mal formado
        pydantic.ValidationError: campos inválidos ou desconhecidos
    """
    return ExperimentConfig.model_validate(tomllib.loads(text))


def load_experiment(path: Optional[str]) -> ExperimentConfig:
    """
    Carrega um arquivo de experimento; sem caminho, devolve os defaults

    Raises:
        FileNotFoundError: arquivo inexistente (a mensagem traz o caminho)
    """
    if path is None:
        return ExperimentConfig()
    file = Path(path)
    if not file.exists():
        raise FileNotFoundError(f"Arquivo de configuração não encontrado: {path}")
    return parse_experiment(file.read_text(encoding="utf-8"))


def experiment_to_toml(config: ExperimentConfig) -> str:
    """
    Serializa o experimento em TOML (usado no cabeçalho dos CSVs)

    Campos None são omitidos; o resultado é aceito de volta por parse_experiment.
    """
    lines: List[str] = []

    def emit_table(prefix: str, data: Dict):
        scalars = {k: v for k, v in data.items() if not isinstance(v, dict) and v is not None}
        tables = {k: v for k, v in data.items() if isinstance(v, dict)}
        if scalars or not tables:
            lines.append(f"[{prefix}]")
            for key, value in scalars.items():
                lines.append(f"{key} = {_toml_value(value)}")
            lines.append("")
        for key, sub in tables.items():
            if key == "checkpoints":
                lines.append(f"[{prefix}.{key}]")
                for name, value in sub.items():
                    lines.append(f"{name} = {_toml_value(value)}")
                lines.append("")
            else:
                emit_table(f"{prefix}.{key}", sub)

    for table, data in config.model_dump(mode="json").items():
        emit_table(table, data)
    return "\n".join(lines)


def _toml_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, float)):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_toml_value(v) for v in value) + "]"
    escaped = str(value).replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'
