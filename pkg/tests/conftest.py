import pytest

from mzvlab import evaluator


@pytest.fixture
def fresh_cache():
    """Swap the process-wide zeta cache for an empty in-memory one."""
    saved = evaluator.default_cache()
    evaluator.configure_cache(None)
    yield evaluator.default_cache()
    evaluator._default_cache = saved
