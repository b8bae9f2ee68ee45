import numpy as np
import pytest

from groundfield import expr as ex
from groundfield.errors import DomainError, ExprSyntaxError, SingularPoint, UnknownIdentifier, VariableOutOfRange


def random_ast(rng, n, depth=4):
    """Smooth expressions that stay finite everywhere away from the origin."""
    if depth == 0 or rng.random() < 0.25:
        kind = rng.integers(0, 3)
        if kind == 0:
            return ex.Num(float(np.round(rng.uniform(0.1, 3.0), 3)))
        if kind == 1:
            return ex.Var(int(rng.integers(1, n + 1)))
        return ex.Radius()
    a = random_ast(rng, n, depth - 1)
    op = rng.choice(["+", "-", "*", "/", "^", "neg", "exp", "sin", "cos", "log", "sqrt", "abs"])
    one_plus_sq = lambda e: ex.BinOp("+", ex.Num(1.0), ex.BinOp("^", e, ex.Num(2.0)))  # noqa: E731
    if op in "+-*":
        return ex.BinOp(op, a, random_ast(rng, n, depth - 1))
    if op == "/":
        return ex.BinOp("/", a, one_plus_sq(random_ast(rng, n, depth - 1)))
    if op == "^":
        return ex.BinOp("^", a, ex.Num(float(rng.integers(2, 4))))
    if op == "neg":
        return ex.Neg(a)
    if op == "exp":
        return ex.Call("exp", ex.Call("sin", a))
    if op == "abs":
        return ex.Call("abs", one_plus_sq(a))
    if op in ("log", "sqrt"):
        return ex.Call(op, one_plus_sq(a))
    return ex.Call(op, a)


def _points(rng, n, count):
    x = rng.normal(size=(count, n))
    r = np.linalg.norm(x, axis=1)
    return x * (np.maximum(r, 0.5) / r)[:, None]


def _ast_corpus(count=200, seed=7):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        n = int(rng.integers(1, 4))
        node = random_ast(rng, n)
        x = _points(rng, n, 4)
        vals = ex.eval_u(node, x)
        if np.all(np.isfinite(vals)) and np.max(np.abs(vals)) < 1e4:
            out.append((n, node, x))
    return out


CORPUS = _ast_corpus()


# -- examples ---------------------------------------------------------------------------

def test_parse_oscillator_u():
    node = ex.parse("0.5*r^2", 3)
    assert node == ex.BinOp("*", ex.Num(0.5), ex.BinOp("^", ex.Radius(), ex.Num(2.0)))


def test_parse_variable_out_of_range():
    with pytest.raises(VariableOutOfRange):
        ex.parse("x1+x4", 3)


def test_parse_grammar_exercise():
    node = ex.parse("exp(x1)*x2 - 3", 2)
    assert node == ex.BinOp("-", ex.BinOp("*", ex.Call("exp", ex.Var(1)), ex.Var(2)), ex.Num(3.0))


def test_syntax_error_reports_position():
    with pytest.raises(ExprSyntaxError) as info:
        ex.parse("1 + * 2", 1)
    assert info.value.position == 4
    with pytest.raises(ExprSyntaxError):
        ex.parse("", 1)
    with pytest.raises(ExprSyntaxError):
        ex.parse("2 3", 1)


def test_unknown_identifier():
    with pytest.raises(UnknownIdentifier):
        ex.parse("tan(x1)", 1)
    with pytest.raises(UnknownIdentifier):
        ex.parse("y", 1)


@pytest.mark.parametrize("text,value", [("2+3*4", 14.0), ("2^3^2", 512.0), ("-2^2", -4.0),
                                        ("8/4/2", 1.0), ("2-3-4", -5.0), ("1.5e2+.5", 150.5),
                                        ("-(1+2)*3", -9.0), ("2*-3", -6.0)])
def test_precedence(text, value):
    assert ex.eval_u(ex.parse(text, 1), [0.0]) == value


def test_eval_examples():
    assert ex.eval_u(ex.parse("r", 2), [3.0, 4.0]) == 5.0
    assert ex.eval_u(ex.parse("0.5*r^2", 3), [1.0, 1.0, 1.0]) == pytest.approx(1.5, rel=1e-15)


@pytest.mark.parametrize("text,x", [("log(x1)", [-1.0]), ("sqrt(x1)", [-2.0]), ("1/x1", [0.0]),
                                    ("log(x1)", [0.0])])
def test_domain_errors(text, x):
    with pytest.raises(DomainError):
        ex.eval_u(ex.parse(text, 1), x)


def test_gradient_examples():
    np.testing.assert_allclose(ex.grad_u(ex.parse("0.5*r^2", 3), [1.0, 2.0, 3.0]), [1, 2, 3], rtol=1e-15)
    np.testing.assert_allclose(ex.grad_u(ex.parse("r", 2), [3.0, 4.0]), [0.6, 0.8], rtol=1e-15)
    np.testing.assert_allclose(ex.grad_u(ex.parse("x1*x2", 2), [2.0, 5.0]), [5.0, 2.0])


def test_laplacian_examples():
    rng = np.random.default_rng(0)
    x = rng.normal(size=(10, 3))
    np.testing.assert_allclose(ex.laplacian_u(ex.parse("0.5*r^2", 3), x), 3.0, rtol=1e-14)
    assert ex.laplacian_u(ex.parse("x1^3", 1), [2.0]) == pytest.approx(12.0, rel=1e-15)


def test_laplacian_of_radius_against_differences():
    node = ex.parse("r", 3)
    x = np.array([2.0, 0.0, 0.0]) @ np.linalg.qr(np.random.default_rng(1).normal(size=(3, 3)))[0]
    lap = ex.laplacian_u(node, x)
    assert lap == pytest.approx(1.0, rel=1e-14)
    h = 1e-3
    fd = sum(ex.eval_u(node, x + h * e) - 2 * ex.eval_u(node, x) + ex.eval_u(node, x - h * e)
             for e in np.eye(3)) / h ** 2
    assert fd == pytest.approx(lap, rel=1e-5)


def test_radius_singular_at_origin():
    with pytest.raises(SingularPoint):
        ex.grad_u(ex.parse("r", 3), [0.0, 0.0, 0.0])
    assert ex.eval_u(ex.parse("r", 3), [0.0, 0.0, 0.0]) == 0.0


def test_even_powers_of_r_are_smooth_at_origin():
    node = ex.parse("0.5*r^2 + r^4", 3)
    np.testing.assert_array_equal(ex.grad_u(node, [0.0, 0.0, 0.0]), 0.0)
    assert ex.laplacian_u(node, [0.0, 0.0, 0.0]) == pytest.approx(3.0)


def test_batched_evaluation_matches_pointwise():
    node = ex.parse("exp(-r^2)*x1 + sin(x2)", 2)
    x = np.random.default_rng(3).normal(size=(5, 2))
    batch = ex.evaluate(node, x, 2)
    for i in range(5):
        single = ex.evaluate(node, x[i], 2)
        assert single.val == pytest.approx(batch.val[i], rel=1e-15)
        np.testing.assert_allclose(single.laplacian, batch.laplacian[i], rtol=1e-14)


# -- properties ---------------------------------------------------------------------------

@pytest.mark.parametrize("case", range(len(CORPUS)))
def test_gradient_and_laplacian_against_differences(case):
    n, node, x = CORPUS[case]
    g = ex.grad_u(node, x)
    lap = ex.laplacian_u(node, x)
    h1, h2 = 1e-5, 1e-3
    fd_g = np.zeros_like(g)
    fd_lap = np.zeros_like(lap)
    f0 = ex.eval_u(node, x)
    for i, e in enumerate(np.eye(n)):
        fp, fm = ex.eval_u(node, x + h1 * e), ex.eval_u(node, x - h1 * e)
        fd_g[:, i] = (fp - fm) / (2 * h1)
        # fourth-order five-point second difference
        f = [ex.eval_u(node, x + k * h2 * e) for k in (-2, -1, 1, 2)]
        fd_lap += (-f[0] + 16 * f[1] - 30 * f0 + 16 * f[2] - f[3]) / (12 * h2 ** 2)
    scale = 1 + np.abs(f0)
    assert np.all(np.abs(g - fd_g) <= 1e-6 * (scale[:, None] + np.abs(g)))
    assert np.all(np.abs(lap - fd_lap) <= 1e-4 * (scale + np.abs(lap)))


def test_render_round_trip_corpus():
    texts = ["0.5*r^2", "x1+x2*x3", "-x1^2", "exp(-r)", "log(1+r^2)/2", "sqrt(abs(x1))",
             "sin(x1)*cos(x2)", "2^3^2", "-(x1-x2)", "1e-3*r^4", "r/(1+r)", "((x1))"]
    nodes = [ex.parse(t, 3) for t in texts] + [node for _, node, _ in CORPUS]
    assert len(nodes) >= 50
    for node in nodes:
        assert ex.parse(ex.render(node), 3) == node


def test_scale_arguments():
    node = ex.parse("x1*r + exp(-x2)", 2)
    x = np.array([[0.3, -1.2], [2.0, 0.5]])
    np.testing.assert_allclose(ex.eval_u(ex.scale_arguments(node, 2.5), x), ex.eval_u(node, 2.5 * x),
                               rtol=1e-14)


def test_is_radial_and_constant():
    assert ex.is_radial(ex.parse("r^2 + exp(-r)", 3))
    assert not ex.is_radial(ex.parse("r + x1", 3))
    assert ex.is_constant(ex.parse("2*3 - log(2)", 1))
