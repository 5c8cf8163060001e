import os
from dotenv import load_dotenv
from typing import List

load_dotenv()


def _float_list(raw: str) -> List[float]:
    return [float(x) for x in raw.split(",") if x.strip()]


class Settings:
    """Configurações centralizadas da aplicação"""

    # Paralelismo (frames por worker no harness)
    THREADS: int = int(os.getenv("HYPERMSG_THREADS", str(os.cpu_count() or 1)))

    # Paths
    CODES_PATH: str = os.getenv("HYPERMSG_CODES_PATH", os.path.join(os.path.dirname(os.path.dirname(__file__)), "codes", "bank"))
    CHECKPOINT_PATH: str = os.getenv("HYPERMSG_CHECKPOINT_PATH", "./checkpoints")
    RESULTS_PATH: str = os.getenv("HYPERMSG_RESULTS_PATH", "./results")

    # Log no console
    VERBOSE: bool = os.getenv("HYPERMSG_VERBOSE", "1") not in ("0", "false", "False", "")

    # Defaults de treino
    LEARNING_RATE: float = float(os.getenv("HYPERMSG_LR", "1e-4"))
    BATCH_SIZE: int = int(os.getenv("HYPERMSG_BATCH_SIZE", "120"))
    SNR_RANGE_DB: List[float] = _float_list(os.getenv("HYPERMSG_SNR_RANGE_DB", "1,8"))
    ITERATIONS: int = int(os.getenv("HYPERMSG_ITERATIONS", "5"))

    # Harness
    MIN_BIT_ERRORS: int = int(os.getenv("HYPERMSG_MIN_BIT_ERRORS", "100"))
    MAX_FRAMES: int = int(os.getenv("HYPERMSG_MAX_FRAMES", "100000"))
    FRAMES_PER_BATCH: int = int(os.getenv("HYPERMSG_FRAMES_PER_BATCH", "200"))
    SEED: int = int(os.getenv("HYPERMSG_SEED", "0"))

    @classmethod
    def validate(cls):
        """Valida as configurações necessárias"""
        errors = []

        if cls.THREADS < 1:
            errors.append("HYPERMSG_THREADS deve ser >= 1")

        if cls.LEARNING_RATE <= 0:
            errors.append("HYPERMSG_LR deve ser positivo")

        if len(cls.SNR_RANGE_DB) != 2 or cls.SNR_RANGE_DB[0] > cls.SNR_RANGE_DB[1]:
            errors.append("HYPERMSG_SNR_RANGE_DB deve ter a forma 'low,high' com low <= high")

        if cls.MIN_BIT_ERRORS < 1:
            errors.append("HYPERMSG_MIN_BIT_ERRORS deve ser >= 1")

        if not os.path.isdir(cls.CODES_PATH):
            errors.append(f"Banco de códigos não encontrado em {cls.CODES_PATH}")

        if errors:
            raise ValueError("\n".join(errors))

        return True


def log(tag: str, message: str):
    """Imprime uma linha de log no formato '[TAG] mensagem' quando VERBOSE está ativo"""
    if settings.VERBOSE:
        print(f"[{tag}] {message}")


settings = Settings()
