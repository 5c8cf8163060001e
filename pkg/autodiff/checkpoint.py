import json
import os
from typing import Any, Dict, Tuple
import numpy as np
from autodiff.optim import ParameterStore

FORMAT_VERSION = 1
_HEADER_KEY = "__header__"


class CheckpointError(ValueError):
    """Checkpoint ausente, corrompido ou de versão incompatível"""


def save_checkpoint(store: ParameterStore, path: str, header: Dict[str, Any]) -> str:
    """
    Salva os parâmetros em .npz com um cabeçalho JSON (versão + configuração)

    Returns:
        caminho efetivo do arquivo
    """
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    full_header = {
        "format_version": FORMAT_VERSION,
        "step": store.step,
        "bounds": {k: list(v) for k, v in store.bounds.items()},
        **header,
    }
    arrays = {f"param/{k}": v for k, v in store.params.items()}
    arrays[_HEADER_KEY] = np.array(json.dumps(full_header, sort_keys=True))
    if not path.endswith(".npz"):
        path = path + ".npz"
    np.savez(path, **arrays)
    return path


def load_checkpoint(path: str) -> Tuple[ParameterStore, Dict[str, Any]]:
    """
    Carrega um checkpoint salvo por save_checkpoint

    Raises:
        CheckpointError: arquivo inexistente, sem cabeçalho ou versão desconhecida
    """
    if not os.path.exists(path):
        raise CheckpointError(f"Checkpoint não encontrado: {path}")
    with np.load(path, allow_pickle=False) as data:
        if _HEADER_KEY not in data.files:
            raise CheckpointError(f"Checkpoint sem cabeçalho: {path}")
        header = json.loads(str(data[_HEADER_KEY]))
        if header.get("format_version") != FORMAT_VERSION:
            raise CheckpointError(
                f"Versão de checkpoint {header.get('format_version')} não suportada (esperada {FORMAT_VERSION})"
            )
        store = ParameterStore()
        bounds = header.get("bounds", {})
        for key in data.files:
            if key.startswith("param/"):
                name = key[len("param/"):]
                store.add(name, data[key], bounds=tuple(bounds[name]) if name in bounds else None)
        store.step = int(header.get("step", 0))
    return store, header
