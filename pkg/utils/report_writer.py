import csv
import io
import json
import os
from typing import Any, Dict, List, Optional, Tuple

# Linhas de metadados começam com '# '; as do TOML embutido com '#| '
META_PREFIX = "# "
CONFIG_PREFIX = "#| "


class ReportWriter:
    """
    Escritor/leitor de resultados autodescritivos

    Os CSVs carregam um cabeçalho comentado (compatível com gnuplot) com os metadados da
    execução e o arquivo de experimento completo, de modo que a execução pode ser
    refeita a partir do próprio CSV.
    """

    @staticmethod
    def to_csv(rows: List[Dict[str, Any]], metadata: Dict[str, Any], config_toml: str = "") -> str:
        """
        Converte linhas de resultado em texto CSV com cabeçalho comentado

        Args:
            rows: linhas (todas com as mesmas chaves)
            metadata: pares chave/valor registrados como '# chave: valor'
            config_toml: experimento serializado, embutido linha a linha

        Returns:
            Texto CSV
        """
        out = io.StringIO()
        for key, value in metadata.items():
            out.write(f"{META_PREFIX}{key}: {json.dumps(value, default=_default)}\n")
        for line in config_toml.splitlines():
            out.write(f"{CONFIG_PREFIX}{line}\n")
        if rows:
            writer = csv.DictWriter(out, fieldnames=list(rows[0].keys()), lineterminator="\n")
            writer.writeheader()
            for row in rows:
                writer.writerow({k: _format(v) for k, v in row.items()})
        return out.getvalue()

    @staticmethod
    def write_csv(path: str, rows: List[Dict[str, Any]], metadata: Dict[str, Any], config_toml: str = "") -> str:
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            f.write(ReportWriter.to_csv(rows, metadata, config_toml))
        return path

    @staticmethod
    def from_csv(text: str) -> Tuple[Dict[str, Any], str, List[Dict[str, Any]]]:
        """
        Lê um CSV escrito por to_csv

        Returns:
            (metadados, TOML embutido, linhas com números convertidos)
        """
        metadata: Dict[str, Any] = {}
        config_lines: List[str] = []
        body: List[str] = []
        for line in text.splitlines():
            if line.startswith(CONFIG_PREFIX.rstrip()):
                config_lines.append(line[len(CONFIG_PREFIX):])
            elif line.startswith(META_PREFIX):
                key, _, raw = line[len(META_PREFIX):].partition(": ")
                metadata[key] = json.loads(raw)
            else:
                body.append(line)
        rows = [{k: _parse(v) for k, v in row.items()} for row in csv.DictReader(body)]
        return metadata, "\n".join(config_lines), rows

    @staticmethod
    def read_csv(path: str) -> Tuple[Dict[str, Any], str, List[Dict[str, Any]]]:
        with open(path, encoding="utf-8") as f:
            return ReportWriter.from_csv(f.read())

    @staticmethod
    def write_json(path: str, data: Dict[str, Any]) -> str:
        """Resumo JSON (ex. TrainReport)"""
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            json.dump(data, f, indent=2, ensure_ascii=False, default=_default)
        return path


def _format(value: Any) -> Any:
    if isinstance(value, float):
        return repr(value)
    return value


def _parse(raw: Optional[str]) -> Any:
    if raw is None or raw == "":
        return None
    for kind in (int, float):
        try:
            return kind(raw)
        except ValueError:
            continue
    if raw in ("True", "False"):
        return raw == "True"
    return raw


def _default(value: Any) -> Any:
    if hasattr(value, "tolist"):
        return value.tolist()
    return str(value)


report_writer = ReportWriter()
