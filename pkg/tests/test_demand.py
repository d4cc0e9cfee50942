"""OD matrix handling: validation, profile statistics, synthesis, CSV."""

import numpy as np
import pytest

from slambus import (DegenerateDemandError, DemandStatistics, ODMatrix,
                     ServiceParameters, SynthesisError, compute_statistics,
                     identify_full_stops, load_od_csv, save_od_csv,
                     synthesize_od, trip_ratio_from_od)
from slambus.demand import (MalformedODError, NegativeFlowError,
                            UpstreamFlowError)


def test_od_validation_rejects_bad_matrices():
    with pytest.raises(MalformedODError):
        ODMatrix(np.ones((2, 3)))
    with pytest.raises(MalformedODError):
        ODMatrix(np.array([[0.0, np.nan], [0.0, 0.0]]))
    with pytest.raises(NegativeFlowError):
        ODMatrix(np.array([[0.0, -1.0], [0.0, 0.0]]))
    with pytest.raises(UpstreamFlowError):
        ODMatrix(np.array([[0.0, 1.0], [1.0, 0.0]]))


def test_statistics_on_hand_matrix():
    # 10 pax 1->2, 20 pax 1->3, 30 pax 2->3
    od = ODMatrix(np.array([
        [0.0, 10.0, 20.0],
        [0.0, 0.0, 30.0],
        [0.0, 0.0, 0.0],
    ]))
    st = compute_statistics(od)
    assert st.total == 60.0
    assert st.boardings.tolist() == [30.0, 30.0, 0.0]
    assert st.alightings.tolist() == [0.0, 10.0, 50.0]
    # only stop 2 is interior; the 1->3 flow rides through it
    assert st.loads.tolist() == [0.0, 20.0, 0.0]
    assert st.peak_flow_share == pytest.approx(50.0 / 60.0)
    assert st.peak_load_share == pytest.approx(20.0 / 60.0)
    # mean trip is (10*1 + 20*2 + 30*1)/60 segments of a 3-stop loop
    assert trip_ratio_from_od(od) == pytest.approx(80.0 / 180.0)


def test_zero_demand_rejected():
    od = ODMatrix(np.zeros((4, 4)))
    with pytest.raises(DegenerateDemandError):
        compute_statistics(od)
    with pytest.raises(DegenerateDemandError):
        trip_ratio_from_od(od)


def test_from_peaks_validation():
    with pytest.raises(ValueError):
        DemandStatistics.from_peaks(0.0, 0.4)
    with pytest.raises(ValueError):
        DemandStatistics.from_peaks(0.1, 1.5)
    st = DemandStatistics.from_peaks(0.1, 0.4, total=1000.0)
    assert st.boardings is None


def test_full_stop_screening():
    params = ServiceParameters()
    # stop 1 boards 5000 pax/h, far beyond one pod exchange per headway
    flows = np.zeros((5, 5))
    flows[0, 4] = 5000.0
    flows[1, 2] = 40.0
    flows[2, 3] = 40.0
    res = identify_full_stops(ODMatrix(flows), params)
    assert res.full_stops == frozenset({1, 5})
    assert res.threshold == pytest.approx(params.pod_capacity / params.min_headway)
    # flow peak is recomputed over the surviving swap stops
    assert res.statistics.peak_flow_share == pytest.approx(40.0 / 5080.0)


def test_synthesis_uniform_and_peaked():
    od = synthesize_od(20, 1000.0)
    assert od.total == pytest.approx(1000.0)
    st = compute_statistics(od)
    assert 0 < st.peak_load_share < 1

    od = synthesize_od(20, 1000.0, "peaked", rho_target=0.4, phi_target=0.1)
    st = compute_statistics(od)
    assert st.peak_load_share == pytest.approx(0.4, rel=0.01)
    assert st.peak_flow_share == pytest.approx(0.1, rel=0.01)

    with pytest.raises(SynthesisError):
        synthesize_od(20, 1000.0, "peaked", rho_target=0.999, phi_target=0.1)


def test_csv_round_trip(tmp_path):
    od = synthesize_od(8, 500.0)      # 500/28 per cell, not representable
    path = tmp_path / "od.csv"
    save_od_csv(od, path)
    back = load_od_csv(path)
    np.testing.assert_allclose(back.flows, od.flows, rtol=0, atol=0)

    path.write_text("1,2\n3\n")
    with pytest.raises(MalformedODError):
        load_od_csv(path)
