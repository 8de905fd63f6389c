import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from trusslab.corpus import CorpusConfig, generate_corpus
from trusslab.module import ModuleMorphism, module_of_ring_module, self_module
from trusslab.ringmod import cyclic_ring_module
from trusslab.truss import truss_of_ring, zn_ring


class Z4Setup:
    """``Z/2 -> Z/4 -> Z/2`` over ``T(Z/4)``, the running non-split example."""

    def __init__(self):
        self.ring = zn_ring(4)
        self.truss = truss_of_ring(self.ring)
        self.z2 = module_of_ring_module(cyclic_ring_module(self.ring, 2), self.truss)
        self.z4 = module_of_ring_module(cyclic_ring_module(self.ring, 4), self.truss)
        self.f = ModuleMorphism(self.z2, self.z4, (0, 2))
        self.g = ModuleMorphism(self.z4, self.z2, (0, 1, 0, 1))
        self.self4 = self_module(self.truss)


@pytest.fixture(scope="session")
def z4():
    return Z4Setup()


@pytest.fixture(scope="session")
def corpus():
    return generate_corpus(CorpusConfig(rings=(2, 3, 4), seed=11, count=12))
