import pytest

from frozen_sl.errors import DomainError, ValidationError
from frozen_sl.timescale import FiniteScale, TwoIntervalScale


@pytest.fixture
def grid6():
    return FiniteScale([0, 1, 2, 3, 4, 5])


@pytest.fixture
def two():
    return TwoIntervalScale(0.0, 1.0, 2.0, 3.0)


def test_sigma_on_unit_grid(grid6):
    assert grid6.sigma(3) == 4
    assert grid6.sigma(5) == 5  # maximum is fixed


def test_sigma_two_interval(two):
    assert two.sigma(1.0) == 2.0
    assert two.sigma(2.5) == 2.5
    assert two.sigma(3.0) == 3.0


def test_rho(grid6, two):
    assert grid6.rho(3) == 2
    assert grid6.rho(0) == 0
    assert two.rho(2.0) == 1.0
    assert two.rho(0.5) == 0.5


def test_mu(two):
    assert two.mu(1.0) == 1.0  # gap width
    assert two.mu(0.0) == 0.0  # dense left endpoint
    scale = FiniteScale([0, 0.5, 2, 3])
    assert scale.mu(0.5) == 1.5


def test_mu_nonnegative_everywhere(grid6, two):
    for t in grid6.points:
        assert grid6.mu(t) >= 0
    for t in [0.0, 0.3, 1.0, 2.0, 2.9, 3.0]:
        assert two.mu(t) >= 0


def test_domains_unit_grid(grid6):
    dom = grid6.domains()
    assert dom.kappa2 == (0, 1, 2, 3)
    assert dom.alpha == 0
    assert dom.beta == 4


def test_domains_two_interval(two):
    dom = two.domains()
    assert dom.kappa == dom.kappa2
    assert dom.alpha == 0.0
    assert dom.beta == 3.0


def test_domains_minimal_scale():
    scale = FiniteScale([0, 1, 2])
    dom = scale.domains()
    assert dom.kappa2 == (0,)
    assert dom.alpha == 0
    assert dom.beta == 1


def test_jump_inverses(grid6, two):
    for scale, pts in [(grid6, grid6.points), (two, [0.0, 0.4, 1.0, 2.0, 2.5, 3.0])]:
        for t in pts:
            if scale.sigma(t) > t:
                assert scale.rho(scale.sigma(t)) == t
            if scale.rho(t) < t:
                assert scale.sigma(scale.rho(t)) == t


def test_point_split_and_iteration():
    scale = FiniteScale([0, 0.5, 1.5, 4, 7, 7.25])
    a = 1.5
    r, m = scale.split_at(a)
    assert scale.n == m + r + 1
    t = a
    for _ in range(m):
        t = scale.sigma(t)
    assert t == scale.points[-1]
    t = a
    for _ in range(r):
        t = scale.rho(t)
    assert t == scale.points[0]


def test_grid_points(grid6):
    for gp in grid6.grid():
        assert gp.value == grid6.points[gp.index]


def test_construction_sorts_but_rejects_duplicates():
    scale = FiniteScale([3, 0, 2, 1])
    assert scale.points == (0, 1, 2, 3)
    with pytest.raises(ValidationError):
        FiniteScale([0, 1, 1, 2])
    with pytest.raises(ValidationError):
        FiniteScale([0, 1])


def test_two_interval_ordering_enforced():
    with pytest.raises(ValidationError):
        TwoIntervalScale(0.0, 2.0, 2.0, 3.0)
    with pytest.raises(ValidationError):
        TwoIntervalScale(0.0, 2.5, 2.0, 3.0)


def test_membership_errors(grid6, two):
    with pytest.raises(DomainError):
        grid6.sigma(2.5)
    with pytest.raises(DomainError):
        two.mu(1.5)  # inside the gap
    with pytest.raises(DomainError):
        two.rho(-1.0)
