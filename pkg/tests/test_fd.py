import numpy as np

from hyperharm import fd


def test_jacobian_shapes_and_values():
    f = lambda x: np.stack([x[..., 0] * x[..., 1], np.sin(x[..., 2])], axis=-1)
    x = np.array([0.1, 0.2, 0.3])
    J = fd.jacobian(f, x)
    assert J.shape == (2, 3)
    np.testing.assert_allclose(J, [[0.2, 0.1, 0.0], [0.0, 0.0, np.cos(0.3)]], atol=1e-9)
    Jb = fd.jacobian(f, np.stack([x, 2 * x]))
    assert Jb.shape == (2, 2, 3)
    np.testing.assert_allclose(Jb[0], J)


def test_laplacian_polynomial():
    f = lambda x: x[..., 0] ** 2 + 3 * x[..., 1] ** 2 - x[..., 2] ** 4
    x = np.array([0.2, -0.1, 0.5])
    lap, scale = fd.laplacian(f, x)
    assert abs(lap - (2 + 6 - 12 * 0.25)) < 1e-5
    assert scale > 0
    lap_r, _ = fd.laplacian_richardson(f, x)
    assert abs(lap_r - 5.0) < 1e-9
