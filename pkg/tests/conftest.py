import numpy as np
import pytest
from codes.code_loader import code_loader
from codes.parity_check import ParityCheckMatrix
from config.settings import settings
from decoders.tanner import build


@pytest.fixture(autouse=True)
def quiet_logs(monkeypatch):
    monkeypatch.setattr(settings, "VERBOSE", False)


@pytest.fixture
def hamming():
    return code_loader.load("HAMMING_7_4")


@pytest.fixture
def repetition():
    return code_loader.load("REPETITION_3_1")


@pytest.fixture
def hamming_graph(hamming):
    return build(hamming)


@pytest.fixture
def repetition_graph(repetition):
    return build(repetition)


# Códigos sem ciclos no grafo de Tanner (BP é exato neles)
TREE_CODES = {
    "repeticao-3": [[1, 1, 0], [0, 1, 1]],
    "repeticao-5": [[1, 1, 0, 0, 0], [0, 1, 1, 0, 0], [0, 0, 1, 1, 0], [0, 0, 0, 1, 1]],
    "paridade-4": [[1, 1, 1, 1]],
    "estrela": [[1, 1, 1, 0, 0, 0, 0], [0, 0, 1, 1, 1, 0, 0], [0, 0, 1, 0, 0, 1, 1]],
    "arvore-8": [
        [1, 1, 1, 0, 0, 0, 0, 0],
        [0, 0, 1, 1, 1, 0, 0, 0],
        [0, 0, 0, 0, 1, 1, 1, 0],
        [0, 1, 0, 0, 0, 0, 0, 1],
    ],
    "caminho-12": [
        [1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 1, 1, 1, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 1, 1, 1, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1],
    ],
}


@pytest.fixture(params=sorted(TREE_CODES))
def tree_code(request):
    return ParityCheckMatrix(np.array(TREE_CODES[request.param]), name=request.param)
