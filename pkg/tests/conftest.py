import pytest

from helpers import make_camera_model, make_smartphone_model


@pytest.fixture
def camera_model():
    return make_camera_model()


@pytest.fixture
def smartphone_model():
    return make_smartphone_model()
