from pathlib import Path

import pytest

import groundtalk as gt
from groundtalk.similarity import SimilarityConfig, SimilarityProvider
from groundtalk.store import SceneStore

DATA_DIR = Path(gt.__file__).parent / "data"
SCENES_DIR = DATA_DIR / "scenes"
COMMANDS_PATH = DATA_DIR / "commands" / "fixture_suite.jsonl"


@pytest.fixture(scope="session")
def scene_store() -> SceneStore:
    return SceneStore(SCENES_DIR)


@pytest.fixture(scope="session")
def fix_cups(scene_store):
    return scene_store.get("fix-cups")


@pytest.fixture(scope="session")
def fix_boy(scene_store):
    return scene_store.get("fix-boy")


@pytest.fixture(scope="session")
def exact_matcher() -> SimilarityProvider:
    return SimilarityProvider(SimilarityConfig(provider="exact"))


@pytest.fixture(scope="session")
def lexicon_matcher() -> SimilarityProvider:
    return SimilarityProvider(SimilarityConfig(provider="lexicon"))


@pytest.fixture(scope="session")
def vectors_matcher() -> SimilarityProvider:
    return SimilarityProvider(
        SimilarityConfig(provider="vectors",
                         vectors_path=gt.bundled_vectors_path())
    )
