import os
import re
from pathlib import Path
from typing import Dict, List
from codes.alist import parse_alist, parse_dense
from codes.parity_check import ParityCheckMatrix, to_systematic
from config.settings import settings, log

# Rótulos de exibição dos códigos incluídos em codes/bank
BANK_LABELS = {
    "REPETITION_3_1": "REPETITION(3,1)",
    "HAMMING_7_4": "HAMMING(7,4)",
    "BCH_31_16": "BCH(31,16)",
    "BCH_63_51": "BCH(63,51)",
    "POLAR_64_48": "POLAR(64,48)",
    "LDPC_ARRAY_121_80": "LDPC-ARRAY(121,80)",
}

SUPPORTED_EXTENSIONS = {".alist", ".txt", ".dense"}


def _normalize(name: str) -> str:
    return re.sub(r"[^A-Z0-9]", "", name.upper())


class CodeLoader:
    """Carrega matrizes de paridade do banco de códigos (alist ou formato denso)"""

    def __init__(self, codes_path: str = None):
        self.codes_path = codes_path or settings.CODES_PATH
        self._cache: Dict[str, ParityCheckMatrix] = {}

    def load_code(self, file_path: str, form: str = "bank") -> ParityCheckMatrix:
        """
        Carrega um código baseado na extensão

        Args:
            file_path: caminho do arquivo (.alist, .txt ou .dense)
            form: 'bank' mantém H como está no arquivo; 'systematic' remove linhas dependentes

        Raises:
            FileNotFoundError: arquivo inexistente
            ValueError: formato não suportado ou conteúdo inválido
        """
        path = Path(file_path)
        if not path.exists():
            raise FileNotFoundError(f"Arquivo de código não encontrado: {path}")

        ext = path.suffix.lower()
        name = BANK_LABELS.get(path.stem, path.stem)
        text = path.read_text(encoding="utf-8")
        if ext == ".alist":
            H = parse_alist(text, name=name)
        elif ext in (".txt", ".dense"):
            H = parse_dense(text, name=name)
        else:
            raise ValueError(f"Formato não suportado: {ext}")

        if form == "systematic":
            H = to_systematic(H)
        elif form != "bank":
            raise ValueError(f"Forma '{form}' não suportada. Use 'bank' ou 'systematic'")

        log("CODES", f"✓ {H.name}: n={H.num_vars}, m={H.num_checks}, k={H.k}")
        return H

    def list_files(self) -> List[Path]:
        """Arquivos de código disponíveis no banco"""
        if not os.path.isdir(self.codes_path):
            log("CODES", f"✗ Pasta {self.codes_path} não encontrada")
            return []
        return sorted(f for f in Path(self.codes_path).glob("*") if f.suffix.lower() in SUPPORTED_EXTENSIONS)

    def resolve(self, ref: str) -> Path:
        """
        Resolve uma referência de código: caminho de arquivo, nome do arquivo ou rótulo

        Exemplos: 'codes/bank/BCH_63_51.alist', 'BCH_63_51', 'BCH(63,51)'
        """
        if os.path.exists(ref):
            return Path(ref)
        wanted = _normalize(ref)
        for f in self.list_files():
            if _normalize(f.stem) == wanted or _normalize(BANK_LABELS.get(f.stem, "")) == wanted:
                return f
        raise KeyError(f"Código desconhecido: '{ref}'")

    def load(self, ref: str, form: str = "bank") -> ParityCheckMatrix:
        """Carrega (com cache) um código pelo nome ou caminho"""
        key = f"{ref}|{form}"
        if key not in self._cache:
            self._cache[key] = self.load_code(str(self.resolve(ref)), form=form)
        return self._cache[key]

    def list_codes(self) -> List[Dict[str, object]]:
        """Tabela dos códigos incluídos (nome, n, m, k, taxa, arquivo)"""
        table = []
        for f in self.list_files():
            H = self.load(str(f))
            table.append({
                "name": H.name,
                "n": H.num_vars,
                "m": H.num_checks,
                "k": H.k,
                "rate": round(float(H.code_rate), 4),
                "file": f.name,
            })
        return table


code_loader = CodeLoader()
