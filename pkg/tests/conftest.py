import pytest

from slambus import (DemandStatistics, EnergyParameters, ServiceParameters,
                     TraditionalParameters)


@pytest.fixture
def params() -> ServiceParameters:
    return ServiceParameters()


@pytest.fixture
def stats() -> DemandStatistics:
    return DemandStatistics.from_peaks(0.1, 0.4)


@pytest.fixture
def energy() -> EnergyParameters:
    return EnergyParameters()


@pytest.fixture
def trad() -> TraditionalParameters:
    return TraditionalParameters()
