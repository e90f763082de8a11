import pytest

from ratedist import _backend


@pytest.fixture(params=_backend.available())
def backend(request):
    """Run the test once per available kernel backend."""
    previous = _backend.use_backend(request.param)
    yield request.param
    _backend.use_backend(previous)
