import pytest

from consultmarket import AnchorConditions, DemandSide, ModelParams, SupplySide
from consultmarket.scenarios import german_transport_anchors, german_transport_params


@pytest.fixture(scope="session")
def german_params() -> ModelParams:
    return german_transport_params(mu=0.05)


@pytest.fixture(scope="session")
def german_anchors() -> AnchorConditions:
    return german_transport_anchors()


@pytest.fixture(scope="session")
def german_demand(german_params) -> DemandSide:
    return DemandSide.closed_form(german_params)


@pytest.fixture(scope="session")
def german_supply(german_params) -> SupplySide:
    return SupplySide.closed_form(german_params)
