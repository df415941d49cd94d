"""Shared fixtures and independent oracles for the test suite.

The PLY builders here are deliberately written with struct/f-strings and
no code shared with the library writer, so they can serve as an
independent serialization oracle.  The same goes for the naive per-face
classifiers used to cross-check the vectorized paths.
"""

import struct

import numpy as np

from jdq import TriMesh


def build_ascii_ply(verts, colors, faces):
    lines = [
        "ply",
        "format ascii 1.0",
        f"element vertex {len(verts)}",
        "property float x",
        "property float y",
        "property float z",
        "property uchar red",
        "property uchar green",
        "property uchar blue",
        f"element face {len(faces)}",
        "property list uchar int vertex_indices",
        "end_header",
    ]
    for (x, y, z), (r, g, b) in zip(verts, colors):
        lines.append(f"{float(x)!r} {float(y)!r} {float(z)!r} {int(r)} {int(g)} {int(b)}")
    for a, b, c in faces:
        lines.append(f"3 {int(a)} {int(b)} {int(c)}")
    return ("\n".join(lines) + "\n").encode("ascii")


def build_binary_ply(verts, colors, faces):
    header = (
        "ply\n"
        "format binary_little_endian 1.0\n"
        f"element vertex {len(verts)}\n"
        "property float x\n"
        "property float y\n"
        "property float z\n"
        "property uchar red\n"
        "property uchar green\n"
        "property uchar blue\n"
        f"element face {len(faces)}\n"
        "property list uchar int vertex_indices\n"
        "end_header\n"
    ).encode("ascii")
    body = bytearray()
    for (x, y, z), (r, g, b) in zip(verts, colors):
        body += struct.pack("<fffBBB", float(x), float(y), float(z), int(r), int(g), int(b))
    for a, b, c in faces:
        body += struct.pack("<Biii", 3, int(a), int(b), int(c))
    return header + bytes(body)


def random_mesh(rng, n_vertices=10, n_faces=6):
    """Random colored mesh with float32-representable coordinates."""
    verts = rng.uniform(-500.0, 500.0, size=(n_vertices, 3)).astype(np.float32).astype(np.float64)
    colors = rng.integers(0, 256, size=(n_vertices, 3))
    faces = rng.integers(0, n_vertices, size=(n_faces, 3))
    return TriMesh(verts, faces, colors)


def naive_classify(mesh, threshold, red_dominance=False):
    """Per-face triple check written as a plain Python loop."""
    ids = []
    colors = mesh.colors.tolist()
    for i, (a, b, c) in enumerate(mesh.faces.tolist()):
        ok = True
        for v in (a, b, c):
            r, g, bl = colors[v]
            if r <= threshold or (red_dominance and not (r > g and r > bl)):
                ok = False
                break
        if ok:
            ids.append(i)
    return ids


def naive_color_match(mesh, target, tolerance):
    """Faces whose three vertices all sit within tolerance of target."""
    ids = []
    colors = mesh.colors.tolist()
    for i, face in enumerate(mesh.faces.tolist()):
        ok = True
        for v in face:
            if any(abs(colors[v][k] - target[k]) > tolerance for k in range(3)):
                ok = False
                break
        if ok:
            ids.append(i)
    return ids


def heron_area(p0, p1, p2):
    """Triangle area by Heron's formula; the cross-product oracle."""
    a = float(np.linalg.norm(np.subtract(p1, p0)))
    b = float(np.linalg.norm(np.subtract(p2, p1)))
    c = float(np.linalg.norm(np.subtract(p0, p2)))
    s = (a + b + c) / 2.0
    under = max(s * (s - a) * (s - b) * (s - c), 0.0)
    return under ** 0.5
