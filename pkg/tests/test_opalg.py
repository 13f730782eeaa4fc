import numpy as np
import pytest
from hypothesis import given, settings as hypothesis_settings
from hypothesis import strategies as st

from exceptions import DSLSyntaxError, MalformedIndexError, UnknownSpeciesError, UnsupportedPatternError
from models import Kind, Species, Statistics, StatisticsConfig
from opalg import (
    LadderSymbol,
    ModeLabel,
    OperatorExpr,
    add,
    adjoint,
    coefficient,
    commutator,
    expand_green,
    format_expr,
    modes_of,
    normal_order,
    parse_expr,
    scale,
    to_complex,
    vacuum_expectation,
    vacuum_expectation_exact,
)
from verification_service import verification_service


def canonical(text, stats=None):
    return format_expr(normal_order(parse_expr(text), stats))


PARABOSE_2 = StatisticsConfig().with_override(Species.UR, Statistics.parabose(2))


@pytest.mark.parametrize(
    "text, expected",
    [
        ("b(1,1) b+(1,1)", "1 - b+(1,1) b(1,1)"),
        ("a(k) a+(k)", "1 + a+(k) a(k)"),
        ("b(p) b+(q)", "delta(p; q) - b+(q) b(p)"),
        ("b(1) b+(2)", "-b+(2) b(1)"),
        ("b+(1) b+(1)", "0"),
        ("b(2) b(1)", "-b(1) b(2)"),
        ("a(2) a(1)", "a(1) a(2)"),
        ("d(1) b+(1)", "-b+(1) d(1)"),
        ("a(1) b(1)", "b(1) a(1)"),
    ],
)
def test_normal_order_examples(text, expected):
    assert canonical(text) == expected


def test_fermi_anticommutator_is_kronecker_delta():
    b1 = OperatorExpr.symbol(LadderSymbol(Species.ELECTRON, Kind.ANNIHILATE, ModeLabel(indices=(1,))))
    b1_dag = adjoint(b1)
    b2_dag = OperatorExpr.symbol(LadderSymbol(Species.ELECTRON, Kind.CREATE, ModeLabel(indices=(2,))))
    assert normal_order(commutator(b1, b1_dag, anti=True)) == OperatorExpr.identity()
    assert normal_order(commutator(b1, b2_dag, anti=True)).is_zero


def test_bose_commutator_keeps_named_delta():
    result = normal_order(parse_expr("a(k) a+(k') - a+(k') a(k)"))
    assert format_expr(result) == "delta(k; k')"


def test_vacuum_expectation_of_bose_pairs():
    assert vacuum_expectation(parse_expr("a(1) a(1) a+(1) a+(1)")) == 2
    assert vacuum_expectation(parse_expr("a(k) a+(q)")) == 0
    assert to_complex(vacuum_expectation_exact(parse_expr("3i b(1) b+(1)"))) == 3j


def test_green_components_anticommute_across_index():
    assert canonical("u[1](1) u[1]+(1)", PARABOSE_2) == "1 + u[1]+(1) u[1](1)"
    assert canonical("u[1](1) u[2]+(1)", PARABOSE_2) == "-u[2]+(1) u[1](1)"


def test_bare_parabose_needs_expansion():
    with pytest.raises(UnsupportedPatternError):
        normal_order(parse_expr("u(1) u+(1)"), PARABOSE_2)
    expanded = expand_green(parse_expr("u(1) u+(1)"), 2)
    assert len(expanded.terms) == 4
    assert vacuum_expectation(expanded, PARABOSE_2) == 2


def test_order_one_parabose_is_bose():
    assert canonical("u(1) u+(1)") == "1 + u+(1) u(1)"


def test_green_index_out_of_range_rejected():
    with pytest.raises(UnsupportedPatternError):
        normal_order(parse_expr("u[3](1)"), PARABOSE_2)


def test_adjoint_conjugates_and_reverses():
    assert adjoint(parse_expr("2i a+(1) a(2)")) == parse_expr("-2i a+(2) a(1)")


@pytest.mark.parametrize(
    "text",
    [
        "(1/2 - 3i) a(1)",
        "-2 a+(k) a(k)",
        "1i b+(1,0,-1,1)",
        "delta(k; q) a(k)",
        "1 + u[2]+(1) u[1](1)",
    ],
)
def test_printer_round_trip(text):
    expr = parse_expr(text)
    assert parse_expr(format_expr(expr)) == expr


def test_coefficient_formatting():
    assert format_expr(parse_expr("(1/2 - 3i) a(1)")) == "(1/2 - 3i) a(1)"
    assert format_expr(parse_expr("i a(1)")) == "1i a(1)"
    assert format_expr(OperatorExpr()) == "0"


def test_unknown_species():
    with pytest.raises(UnknownSpeciesError) as err:
        parse_expr("a(1) x(2)")
    assert err.value.column == 6
    assert err.value.exit_code == 2


def test_syntax_error_has_position():
    with pytest.raises(DSLSyntaxError) as err:
        parse_expr("a(1")
    assert err.value.line == 1


def test_identifier_only_first():
    with pytest.raises(MalformedIndexError):
        parse_expr("a(1,k)")


def test_zero_denominator_has_position():
    with pytest.raises(MalformedIndexError) as err:
        parse_expr("a(1) + 3/0 a(2)")
    assert (err.value.line, err.value.column) == (1, 8)
    assert err.value.exit_code == 2


def test_green_component_zero_has_position():
    with pytest.raises(MalformedIndexError) as err:
        parse_expr("u[0](1)")
    assert (err.value.line, err.value.column) == (1, 1)


def test_modes_of_lists_first_appearance():
    pairs = modes_of(parse_expr("a(2) b(1)"))
    assert (Species.PHOTON, ModeLabel(indices=(2,))) in pairs
    assert (Species.ELECTRON, ModeLabel(indices=(1,))) in pairs


def test_scalar_algebra_is_exact():
    expr = parse_expr("1/3 a(1)") * coefficient(3)
    assert expr == parse_expr("a(1)")
    assert (parse_expr("a(1)") - parse_expr("a(1)")).is_zero


@hypothesis_settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), family=st.sampled_from(["fermi", "bose", "parabose"]))
def test_normal_order_terminates_and_is_idempotent(seed, family):
    stats = PARABOSE_2 if family == "parabose" else None
    expr = verification_service.random_expr(np.random.default_rng(seed), family, max_factors=8)
    once = normal_order(expr, stats)
    assert normal_order(once, stats) == once


@hypothesis_settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), family=st.sampled_from(["fermi", "bose", "parabose"]))
def test_normal_order_is_confluent_over_sums(seed, family):
    stats = PARABOSE_2 if family == "parabose" else None
    rng = np.random.default_rng(seed)
    x = verification_service.random_expr(rng, family)
    y = verification_service.random_expr(rng, family)
    assert normal_order(x + y, stats) == normal_order(x, stats) + normal_order(y, stats)
    assert normal_order(x * y, stats) == normal_order(normal_order(x, stats) * normal_order(y, stats), stats)


@hypothesis_settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_order_one_parabose_matches_bose_on_random_expressions(seed):
    expr = verification_service.random_expr(np.random.default_rng(seed), "bose")
    order_one = StatisticsConfig().with_override(Species.PHOTON, Statistics.parabose(1))
    assert normal_order(expr, order_one) == normal_order(expr)


@hypothesis_settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), family=st.sampled_from(["fermi", "bose", "parabose"]))
def test_parse_print_round_trip_on_random_corpus(seed, family):
    expr = verification_service.random_expr(np.random.default_rng(seed), family)
    assert parse_expr(format_expr(expr)) == expr


def test_add_and_scale_collect_terms():
    x = parse_expr("a+(1) a(1)")
    total = add(x, scale(x, coefficient(0, 1)))
    assert format_expr(total) == "(1 + 1i) a+(1) a(1)"
    assert add(x, scale(x, -1)).is_zero
