import math

import pytest

import nanoheat as nh


def make_sphere(r_nm=5.0, material=None):
    m = material if material is not None else nh.material("SiC")
    return nh.Spheroid(r_nm * 1e-9, r_nm * 1e-9, m)


def test_constants_are_si():
    assert nh.hbar == pytest.approx(1.054571817e-34, rel=1e-12)
    assert nh.k_boltzmann == pytest.approx(1.380649e-23, rel=1e-12)
    assert nh.ev_to_rad_s(1.0) == pytest.approx(1.519267e15, rel=1e-5)


def test_materials_registry():
    names = nh.material_names()
    assert {"SiC", "Au", "metal_1e6i"} <= set(names)
    sic = nh.material("SiC")
    eps = sic(nh.ev_to_rad_s(0.105))
    assert eps.real < 0.0  # inside the reststrahlen band
    assert eps.imag > 0.0
    with pytest.raises(KeyError):
        nh.material("unobtainium")


def test_spheroid_geometry():
    s = nh.Spheroid(12e-9, 3e-9, nh.material("SiC"))
    assert s.aspect == pytest.approx(0.25)
    n_par, n_perp = nh.depolarization_factors(s)
    assert n_par + 2.0 * n_perp == pytest.approx(1.0, rel=1e-14)
    assert n_par < 1.0 / 3.0  # needle depolarizes weakly along its axis
    sphere = nh.equal_volume_sphere(s)
    assert sphere.volume == pytest.approx(s.volume, rel=1e-13)


def test_transfer_between_spheres():
    pair = nh.Pair(make_sphere(), make_sphere(), 100e-9, t1=300.0, t2=0.0)
    res = nh.transfer_general(pair)
    assert res.watts == pytest.approx(3.1949292438703513e-15, rel=1e-6)
    assert res.dipole_ok
    oracle = nh.oracle_transfer(pair)
    assert oracle.watts == pytest.approx(res.watts, rel=1e-6)


def test_emission_and_channels():
    res = nh.emission(make_sphere(), 300.0)
    assert res.watts == pytest.approx(1.8004920814009216e-16, rel=1e-6)

    pair = nh.Pair(make_sphere(), make_sphere(), 100e-9, t1=300.0, t2=0.0)
    dec = nh.channel_decomposition(pair)
    assert dec.total == pytest.approx(dec.d2 + dec.d4 + dec.d6, rel=1e-10)
    assert dec.d6 > dec.d2  # 100 nm is deep in the near zone


def test_switch_quality_and_beta_profile():
    needle = nh.spheroid_from_volume(make_sphere().volume, 0.2, nh.material("SiC"))
    pair = nh.Pair(needle, needle, 1.0, t1=300.0, t2=0.0)
    q = nh.switch_quality(pair, nh.Regime.far)
    assert q.quality > 1e3

    profile = nh.transfer_beta_profile(pair, nh.Regime.near)
    assert profile.eval(0.0) > profile.eval(math.pi / 2)


def test_validity_flags_surface():
    pair = nh.Pair(make_sphere(), make_sphere(), 20e-9, t1=300.0, t2=0.0)
    res = nh.transfer_general(pair)
    assert not res.dipole_ok
    assert "size1_vs_d" in res.warnings


def test_quadrature_error_propagates():
    spec = nh.QuadratureSpec()
    spec.rel_tol = 1e-12
    spec.panel_budget = 8
    pair = nh.Pair(make_sphere(), make_sphere(), 100e-9, t1=300.0, t2=0.0)
    with pytest.raises(RuntimeError):
        nh.transfer_general(pair, spec)
