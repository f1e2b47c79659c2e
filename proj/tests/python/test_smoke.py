import numpy as np
import pytest

import meshrep


def test_affine_image_is_exact():
    rows, cols = np.mgrid[0:48, 0:64]
    image = 100.0 + 0.3 * cols - 0.2 * rows
    mesh = meshrep.represent(image, method="ama", k=1, sd=0.05)
    rec = meshrep.reconstruct(mesh, 64, 48, clamp=False)
    assert np.max(np.abs(rec - image)) < 1e-6


@pytest.mark.parametrize("method", ["ama", "ed", "gprama", "gpred"])
def test_methods_hit_the_vertex_budget(method):
    image = meshrep.synthetic("blobs", 64)
    mesh = meshrep.represent(image, method=method, sd=0.04, gamma=2.0)
    assert mesh.check() is None
    assert abs(mesh.num_vertices - 0.04 * image.size) <= 0.05 * 0.04 * image.size + 1
    assert mesh.points.shape == (mesh.num_vertices, 2)
    assert mesh.triangles.shape == (mesh.num_triangles, 3)
    assert mesh.triangles.max() < mesh.num_vertices
    p = meshrep.psnr(meshrep.reconstruct(mesh, 64, 64), image)
    assert 15.0 < p < 80.0


def test_psnr_examples():
    a = np.zeros((4, 4))
    assert meshrep.psnr(a, a) == float("inf")
    assert meshrep.psnr(a + 255.0, a) == pytest.approx(0.0)


def test_mesh_round_trip(tmp_path):
    image = meshrep.synthetic("edges", 32)
    mesh = meshrep.represent(image, method="ed", sd=0.1)
    path = str(tmp_path / "m.mesh")
    mesh.save(path)
    back = meshrep.Mesh.load(path)
    assert np.array_equal(back.points, mesh.points)
    assert np.array_equal(back.values, mesh.values)
    assert np.array_equal(back.triangles, mesh.triangles)


def test_errors():
    with pytest.raises(meshrep.ParameterError):
        meshrep.represent(np.zeros((8, 8)), method="nope")
    with pytest.raises(meshrep.DimensionError):
        meshrep.psnr(np.zeros((4, 4)), np.zeros((4, 5)))
    with pytest.raises(meshrep.IoError):
        meshrep.read_image("/nonexistent.pgm")
