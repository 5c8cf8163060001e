from typing import Any, Dict, List
import numpy as np


class InputGuardrails:
    """Guardrails para validação das entradas dos decodificadores"""

    @staticmethod
    def validate_llr(llr, num_vars: int) -> Dict[str, Any]:
        """
        Valida um frame (n,) ou lote (B, n) de LLRs

        Returns:
            dict com 'valid', 'message', 'sanitized'
        """
        try:
            arr = np.asarray(llr, dtype=np.float64)
        except (TypeError, ValueError):
            return {"valid": False, "message": "LLRs devem ser numéricos", "sanitized": None}

        if arr.ndim not in (1, 2) or arr.shape[-1] != num_vars:
            return {
                "valid": False,
                "message": f"LLRs com shape {arr.shape}; esperado (n,) ou (B, n) com n={num_vars}",
                "sanitized": None,
            }

        if not np.isfinite(arr).all():
            return {"valid": False, "message": "LLRs contêm NaN ou Inf", "sanitized": None}

        return {"valid": True, "message": "Entrada válida", "sanitized": arr}


class OutputGuardrails:
    """Guardrails para validação e apresentação de saídas"""

    @staticmethod
    def handle_error_gracefully(error: Exception, context: str = "") -> str:
        """
        Converte erros em mensagens amigáveis para CLI e API

        Args:
            error: Exceção capturada
            context: Contexto onde o erro ocorreu

        Returns:
            Mensagem amigável para o usuário
        """
        error_type = type(error).__name__

        friendly_messages = {
            "FileNotFoundError": "Arquivo não encontrado",
            "CheckpointError": "Checkpoint inválido ou ausente",
            "AlistParseError": "Arquivo de código mal formado",
            "ValidationError": "Configuração inválida",
            "TOMLDecodeError": "Arquivo de configuração TOML mal formado",
            "KeyError": "Referência desconhecida",
        }

        base_message = friendly_messages.get(error_type, "Erro ao executar o experimento")
        detail = error.args[0] if isinstance(error, KeyError) and error.args else str(error)

        technical_info = f"\n[Detalhes técnicos: {error_type}"
        if context:
            technical_info += f" em {context}"
        technical_info += "]"

        return f"{base_message}: {detail}{technical_info}"


class TrainingGuardrails:
    """Guardrails para acompanhar um treino"""

    @staticmethod
    def check_divergence(loss: float, params: Dict[str, np.ndarray]) -> Dict[str, Any]:
        """
        Detecta NaN/Inf na perda ou nos parâmetros

        Returns:
            dict com 'diverged' e 'reason'
        """
        if not np.isfinite(loss):
            return {"diverged": True, "reason": f"perda não finita ({loss})"}
        for name, value in params.items():
            if not np.isfinite(value).all():
                return {"diverged": True, "reason": f"parâmetro '{name}' não finito"}
        return {"diverged": False, "reason": None}

    @staticmethod
    def detect_plateau(losses: List[float], window: int = 50, tolerance: float = 1e-9) -> bool:
        """
        Detecta se a perda parou de variar

        Args:
            losses: histórico de perdas
            window: tamanho da janela observada
        """
        if len(losses) < window:
            return False
        recent = np.asarray(losses[-window:])
        return bool(np.ptp(recent) <= tolerance)
