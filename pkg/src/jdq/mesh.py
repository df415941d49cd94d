"""Vertex-colored triangle meshes and their PLY/OBJ interchange formats.

The mesh model is deliberately small: float positions, 8-bit RGB vertex
colors, triangular faces, and optional per-face RGB colors on the output
side.  PLY is read in ASCII and binary-little-endian flavors; OBJ is read
in the 6-component ``v x y z r g b`` vertex-color extension.  Unknown PLY
elements and properties are skipped with a warning because photogrammetry
exports routinely carry normals, alpha channels, and camera elements.
"""

from __future__ import annotations

import re
import struct
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class MeshError(Exception):
    """Base class for mesh input problems."""


class MeshParseError(MeshError):
    """Malformed or unsupported mesh data."""


class ColorlessMeshError(MeshError):
    """The mesh carries no vertex colors, so color-based damage
    classification is impossible."""


# PLY scalar type name -> numpy dtype code (little-endian applied at use site).
_PLY_DTYPES = {
    "char": "i1", "int8": "i1",
    "uchar": "u1", "uint8": "u1",
    "short": "i2", "int16": "i2",
    "ushort": "u2", "uint16": "u2",
    "int": "i4", "int32": "i4",
    "uint": "u4", "uint32": "u4",
    "float": "f4", "float32": "f4",
    "double": "f8", "float64": "f8",
}

_STRUCT_CODES = {
    "i1": "b", "u1": "B", "i2": "h", "u2": "H",
    "i4": "i", "u4": "I", "f4": "f", "f8": "d",
}

_INT_DTYPES = {"i1", "u1", "i2", "u2", "i4", "u4"}

_NAME_RE = re.compile(r"[A-Za-z0-9_.\-]+")

_VERTEX_SCALARS = ("x", "y", "z", "red", "green", "blue")
_FACE_LIST_NAMES = ("vertex_indices", "vertex_index")

_MAX_HEADER_LINES = 10000


@dataclass
class TriMesh:
    """Triangle mesh with optional per-vertex and per-face RGB colors.

    vertices:    (n, 3) float64 positions, finite
    faces:       (m, 3) int32 vertex indices, each < n
    colors:      (n, 3) uint8 vertex RGB, or None for geometry-only meshes
    face_colors: (m, 3) uint8 face RGB, or None (set on recolored outputs)

    Degenerate faces (repeated indices) are permitted; their area is zero.
    """

    vertices: np.ndarray
    faces: np.ndarray
    colors: np.ndarray | None = None
    face_colors: np.ndarray | None = None

    def __post_init__(self):
        self.vertices = np.ascontiguousarray(self.vertices, dtype=np.float64).reshape(-1, 3)
        if not np.isfinite(self.vertices).all():
            raise ValueError("vertex coordinates must be finite")
        f = np.asarray(self.faces)
        f = f.reshape(-1, 3) if f.size else f.reshape(0, 3)
        if f.size:
            if not np.issubdtype(f.dtype, np.integer):
                raise ValueError("face indices must be integers")
            if f.min() < 0 or f.max() >= len(self.vertices):
                raise ValueError("face index out of range")
        self.faces = np.ascontiguousarray(f, dtype=np.int32)
        self.colors = self._check_colors(self.colors, len(self.vertices), "vertex")
        self.face_colors = self._check_colors(self.face_colors, len(self.faces), "face")

    @staticmethod
    def _check_colors(colors, expected, kind):
        if colors is None:
            return None
        c = np.asarray(colors)
        if np.issubdtype(c.dtype, np.floating) or (c.size and (c.min() < 0 or c.max() > 255)):
            raise ValueError(f"{kind} colors must be integers in 0..255")
        c = np.ascontiguousarray(c, dtype=np.uint8).reshape(-1, 3)
        if len(c) != expected:
            raise ValueError(f"{kind} color count does not match {kind} count")
        return c

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    def __repr__(self):
        return (f"TriMesh(n_vertices={self.n_vertices}, n_faces={self.n_faces}, "
                f"colored={self.colors is not None})")


def mesh_equal(a: TriMesh, b: TriMesh, pos_tol: float = 0.0) -> bool:
    """Structural equality; positions compared exactly or within ``pos_tol``."""
    if a.vertices.shape != b.vertices.shape or not np.array_equal(a.faces, b.faces):
        return False
    if pos_tol == 0.0:
        if not np.array_equal(a.vertices, b.vertices):
            return False
    elif not np.allclose(a.vertices, b.vertices, rtol=0.0, atol=pos_tol):
        return False

    def same(x, y):
        if x is None or y is None:
            return x is None and y is None
        return np.array_equal(x, y)

    return same(a.colors, b.colors) and same(a.face_colors, b.face_colors)


@dataclass
class _PlyProperty:
    name: str
    dtype: str                      # numpy code of the value type
    count_dtype: str | None = None  # set for list properties


@dataclass
class _PlyElement:
    name: str
    count: int
    properties: list = field(default_factory=list)

    def has_list(self):
        return any(p.count_dtype for p in self.properties)


def _split_header(data: bytes):
    """Return (header lines, body offset). The terminator line is consumed."""
    lines = []
    offset = 0
    while True:
        nl = data.find(b"\n", offset)
        if nl == -1:
            raise MeshParseError("PLY header not terminated by end_header")
        line = data[offset:nl].rstrip(b"\r").strip()
        offset = nl + 1
        if line == b"end_header":
            return lines, offset
        lines.append(line)
        if len(lines) > _MAX_HEADER_LINES:
            raise MeshParseError("PLY header too large")


def _scalar_dtype(type_name, context):
    try:
        return _PLY_DTYPES[type_name]
    except KeyError:
        raise MeshParseError(f"unknown PLY type {type_name!r} in {context}") from None


def _parse_header(data: bytes):
    lines, body_offset = _split_header(data)
    if not lines or lines[0] != b"ply":
        raise MeshParseError("not a PLY file (missing 'ply' magic)")
    fmt = None
    elements: list[_PlyElement] = []
    for raw in lines[1:]:
        if not raw:
            continue
        try:
            text = raw.decode("ascii")
        except UnicodeDecodeError:
            raise MeshParseError("non-ASCII bytes in PLY header") from None
        parts = text.split()
        key = parts[0]
        if key in ("comment", "obj_info"):
            continue
        if key == "format":
            if len(parts) != 3 or parts[2] != "1.0":
                raise MeshParseError(f"malformed PLY format line: {text!r}")
            if parts[1] == "ascii":
                fmt = "ascii"
            elif parts[1] == "binary_little_endian":
                fmt = "binary"
            elif parts[1] == "binary_big_endian":
                raise MeshParseError("big-endian PLY is not supported")
            else:
                raise MeshParseError(f"unknown PLY format {parts[1]!r}")
        elif key == "element":
            if len(parts) != 3:
                raise MeshParseError(f"malformed element line: {text!r}")
            name = parts[1]
            if not _NAME_RE.fullmatch(name):
                raise MeshParseError(f"invalid element name {name!r}")
            try:
                count = int(parts[2])
            except ValueError:
                raise MeshParseError(f"bad element count in {text!r}") from None
            if count < 0:
                raise MeshParseError("negative element count")
            elements.append(_PlyElement(name, count))
        elif key == "property":
            if not elements:
                raise MeshParseError("property declared before any element")
            if len(parts) >= 2 and parts[1] == "list":
                if len(parts) != 5:
                    raise MeshParseError(f"malformed list property: {text!r}")
                count_dt = _scalar_dtype(parts[2], text)
                val_dt = _scalar_dtype(parts[3], text)
                if count_dt not in _INT_DTYPES:
                    raise MeshParseError("list count type must be an integer type")
                name = parts[4]
                prop = _PlyProperty(name, val_dt, count_dt)
            else:
                if len(parts) != 3:
                    raise MeshParseError(f"malformed property line: {text!r}")
                name = parts[2]
                prop = _PlyProperty(name, _scalar_dtype(parts[1], text))
            if not _NAME_RE.fullmatch(name):
                raise MeshParseError(f"invalid property name {name!r}")
            if any(p.name == name for p in elements[-1].properties):
                raise MeshParseError(f"duplicate property {name!r} in element {elements[-1].name!r}")
            elements[-1].properties.append(prop)
        else:
            raise MeshParseError(f"unrecognized PLY header line: {text!r}")
    if fmt is None:
        raise MeshParseError("PLY header has no format line")
    for elem in elements:
        if elem.count and not elem.properties:
            raise MeshParseError(f"element {elem.name!r} declares no properties")
    return fmt, elements, body_offset


def _read_binary_row(data: bytes, pos: int, elem: _PlyElement):
    """Decode one row property-by-property. Slow path for ragged layouts."""
    row = {}
    for p in elem.properties:
        if p.count_dtype:
            code = _STRUCT_CODES[p.count_dtype]
            size = struct.calcsize(code)
            if pos + size > len(data):
                raise MeshParseError(f"PLY data truncated in element {elem.name!r}")
            (n,) = struct.unpack_from("<" + code, data, pos)
            pos += size
            if n < 0:
                raise MeshParseError(f"negative list length in element {elem.name!r}")
            vsize = struct.calcsize(_STRUCT_CODES[p.dtype])
            if pos + n * vsize > len(data):
                raise MeshParseError(f"PLY data truncated in element {elem.name!r}")
            row[p.name] = np.frombuffer(data, dtype="<" + p.dtype, count=n, offset=pos)
            pos += n * vsize
        else:
            code = _STRUCT_CODES[p.dtype]
            size = struct.calcsize(code)
            if pos + size > len(data):
                raise MeshParseError(f"PLY data truncated in element {elem.name!r}")
            (row[p.name],) = struct.unpack_from("<" + code, data, pos)
            pos += size
    return row, pos


def _empty_element(elem: _PlyElement):
    out = {}
    for p in elem.properties:
        if p.count_dtype:
            out[p.name] = []
            out[p.name + "/count"] = np.zeros(0, dtype=np.int64)
        else:
            out[p.name] = np.zeros(0, dtype="<" + p.dtype)
    return out


def _decode_binary_element(data: bytes, offset: int, elem: _PlyElement, wanted: bool):
    if elem.count == 0:
        return (_empty_element(elem) if wanted else None), offset
    if not elem.has_list():
        dtype = np.dtype([(p.name, "<" + p.dtype) for p in elem.properties])
        need = dtype.itemsize * elem.count
        if offset + need > len(data):
            raise MeshParseError(f"PLY data truncated in element {elem.name!r}")
        result = None
        if wanted:
            arr = np.frombuffer(data, dtype=dtype, count=elem.count, offset=offset)
            result = {p.name: arr[p.name] for p in elem.properties}
        return result, offset + need

    # List layouts: learn list lengths from the first row and try a
    # uniform-stride parse; fall back to a row walk on ragged data.
    first, _ = _read_binary_row(data, offset, elem)
    fields = []
    for p in elem.properties:
        if p.count_dtype:
            fields.append((p.name + "/count", "<" + p.count_dtype))
            fields.append((p.name, "<" + p.dtype, (len(first[p.name]),)))
        else:
            fields.append((p.name, "<" + p.dtype))
    dtype = np.dtype(fields)
    need = dtype.itemsize * elem.count
    if offset + need <= len(data):
        arr = np.frombuffer(data, dtype=dtype, count=elem.count, offset=offset)
        uniform = all(
            (arr[p.name + "/count"] == len(first[p.name])).all()
            for p in elem.properties if p.count_dtype
        )
        if uniform:
            result = None
            if wanted:
                result = {}
                for p in elem.properties:
                    result[p.name] = arr[p.name]
                    if p.count_dtype:
                        result[p.name + "/count"] = arr[p.name + "/count"].astype(np.int64)
            return result, offset + need

    rows = {p.name: [] for p in elem.properties}
    pos = offset
    for _ in range(elem.count):
        row, pos = _read_binary_row(data, pos, elem)
        if wanted:
            for name, value in row.items():
                rows[name].append(value)
    result = None
    if wanted:
        result = {}
        for p in elem.properties:
            if p.count_dtype:
                result[p.name] = rows[p.name]
                result[p.name + "/count"] = np.array([len(v) for v in rows[p.name]], dtype=np.int64)
            else:
                result[p.name] = np.array(rows[p.name])
    return result, pos


def _decode_binary(data: bytes, offset: int, elements, wanted_names):
    decoded = {}
    for elem in elements:
        result, offset = _decode_binary_element(data, offset, elem, elem.name in wanted_names)
        if result is not None:
            decoded[elem.name] = result
    if data[offset:].strip(b" \t\r\n\x00"):
        warnings.warn("ignoring trailing bytes after the final PLY element", stacklevel=3)
    return decoded


def _ascii_column(tokens, dtype, elem_name, prop_name):
    col = np.asarray(tokens)
    try:
        if dtype in _INT_DTYPES:
            return col.astype(np.int64)
        return col.astype(np.float64)
    except (ValueError, OverflowError):
        raise MeshParseError(
            f"bad {prop_name!r} value in ASCII element {elem_name!r}") from None


def _decode_ascii_element(chunk, elem: _PlyElement):
    if not elem.has_list():
        toks = [line.split() for line in chunk]
        nprops = len(elem.properties)
        if any(len(t) != nprops for t in toks):
            raise MeshParseError(f"wrong token count in ASCII element {elem.name!r}")
        cols = list(zip(*toks)) if toks else [()] * nprops
        return {p.name: _ascii_column(cols[j], p.dtype, elem.name, p.name)
                for j, p in enumerate(elem.properties)}

    rows = {p.name: [] for p in elem.properties}
    for line in chunk:
        t = line.split()
        i = 0
        try:
            for p in elem.properties:
                if p.count_dtype:
                    n = int(t[i])
                    i += 1
                    if n < 0:
                        raise MeshParseError(f"negative list length in element {elem.name!r}")
                    if i + n > len(t):
                        raise IndexError
                    vals = t[i:i + n]
                    i += n
                    rows[p.name].append(_ascii_column(vals, p.dtype, elem.name, p.name))
                else:
                    rows[p.name].append(t[i])
                    i += 1
        except IndexError:
            raise MeshParseError(f"short row in ASCII element {elem.name!r}") from None
        except ValueError:
            raise MeshParseError(f"bad list length in ASCII element {elem.name!r}") from None
        if i != len(t):
            raise MeshParseError(f"extra tokens in ASCII element {elem.name!r}")
    result = {}
    for p in elem.properties:
        if p.count_dtype:
            result[p.name] = rows[p.name]
            result[p.name + "/count"] = np.array([len(v) for v in rows[p.name]], dtype=np.int64)
        else:
            result[p.name] = _ascii_column(rows[p.name], p.dtype, elem.name, p.name)
    return result


def _decode_ascii(data: bytes, offset: int, elements, wanted_names):
    try:
        text = data[offset:].decode("ascii")
    except UnicodeDecodeError:
        raise MeshParseError("non-ASCII bytes in ASCII PLY body") from None
    lines = [ln for ln in text.splitlines() if ln.strip()]
    decoded = {}
    pos = 0
    for elem in elements:
        if pos + elem.count > len(lines):
            raise MeshParseError(f"ASCII PLY truncated in element {elem.name!r}")
        chunk = lines[pos:pos + elem.count]
        pos += elem.count
        if elem.name in wanted_names:
            decoded[elem.name] = _decode_ascii_element(chunk, elem)
    if pos < len(lines):
        warnings.warn("ignoring trailing lines after the final PLY element", stacklevel=3)
    return decoded


def _warn_unknown(elem: _PlyElement, known):
    for p in elem.properties:
        if p.name not in known:
            warnings.warn(
                f"ignoring unknown PLY property {p.name!r} in element {elem.name!r}",
                stacklevel=4)


def _extract_vertices(vdata, velem: _PlyElement):
    props = {p.name: p for p in velem.properties}
    for name in ("x", "y", "z"):
        if props[name].count_dtype:
            raise MeshParseError(f"vertex property {name!r} must be scalar")
    _warn_unknown(velem, _VERTEX_SCALARS)
    positions = np.column_stack([
        np.asarray(vdata["x"], dtype=np.float64),
        np.asarray(vdata["y"], dtype=np.float64),
        np.asarray(vdata["z"], dtype=np.float64),
    ])
    if not np.isfinite(positions).all():
        raise MeshParseError("non-finite vertex coordinate")
    channels = []
    for name in ("red", "green", "blue"):
        prop = props[name]
        if prop.count_dtype or prop.dtype not in _INT_DTYPES:
            raise MeshParseError(f"vertex color {name!r} must be an integer scalar")
        c = np.asarray(vdata[name], dtype=np.int64)
        if c.size and (c.min() < 0 or c.max() > 255):
            raise MeshParseError(f"vertex color {name!r} outside 0..255")
        channels.append(c)
    colors = np.column_stack(channels).astype(np.uint8)
    return positions, colors


def _extract_faces(fdata, felem: _PlyElement, n_vertices: int):
    list_name = next((n for n in _FACE_LIST_NAMES
                      if any(p.name == n and p.count_dtype for p in felem.properties)), None)
    if list_name is None:
        raise MeshParseError("face element has no vertex index list property")
    counts = fdata[list_name + "/count"]
    if counts.size and not (np.asarray(counts) == 3).all():
        raise MeshParseError("only triangular faces are supported (face arity != 3)")
    values = fdata[list_name]
    if len(counts) == 0:
        faces = np.zeros((0, 3), dtype=np.int64)
    else:
        faces = np.asarray(values, dtype=np.int64).reshape(len(counts), 3)
    if faces.size and (faces.min() < 0 or faces.max() >= n_vertices):
        raise MeshParseError("face index out of range")

    face_colors = None
    color_props = [p for p in felem.properties
                   if p.name in ("red", "green", "blue") and not p.count_dtype]
    if len(color_props) == 3:
        chans = []
        for name in ("red", "green", "blue"):
            prop = next(p for p in color_props if p.name == name)
            if prop.dtype not in _INT_DTYPES:
                raise MeshParseError(f"face color {name!r} must be an integer scalar")
            c = np.asarray(fdata[name], dtype=np.int64)
            if c.size and (c.min() < 0 or c.max() > 255):
                raise MeshParseError(f"face color {name!r} outside 0..255")
            chans.append(c)
        face_colors = np.column_stack(chans).astype(np.uint8) if len(faces) else None
    _warn_unknown(felem, (list_name, "red", "green", "blue"))
    return faces, face_colors


def parse_ply(data: bytes) -> TriMesh:
    """Parse a PLY byte stream (ASCII or binary little-endian).

    Raises MeshParseError on malformed input and ColorlessMeshError when
    the vertex element lacks red/green/blue properties.
    """
    data = bytes(data)
    fmt, elements, body_offset = _parse_header(data)
    by_name = {}
    for elem in elements:
        if elem.name in by_name:
            raise MeshParseError(f"duplicate element {elem.name!r}")
        by_name[elem.name] = elem
    if "vertex" not in by_name:
        raise MeshParseError("PLY has no vertex element")
    velem = by_name["vertex"]
    vprops = {p.name for p in velem.properties}
    missing = [n for n in ("x", "y", "z") if n not in vprops]
    if missing:
        raise MeshParseError(f"vertex element missing coordinate properties: {missing}")
    if not {"red", "green", "blue"} <= vprops:
        raise ColorlessMeshError(
            "mesh has no vertex colors (red/green/blue properties); "
            "damage classification requires a vertex-colored mesh")

    for elem in elements:
        if elem.name not in ("vertex", "face"):
            warnings.warn(f"ignoring unknown PLY element {elem.name!r}", stacklevel=2)

    wanted = {"vertex", "face"}
    if fmt == "binary":
        decoded = _decode_binary(data, body_offset, elements, wanted)
    else:
        decoded = _decode_ascii(data, body_offset, elements, wanted)

    positions, colors = _extract_vertices(decoded["vertex"], velem)
    if "face" in decoded:
        faces, face_colors = _extract_faces(decoded["face"], by_name["face"], len(positions))
    else:
        faces, face_colors = np.zeros((0, 3), dtype=np.int64), None
    try:
        return TriMesh(positions, faces, colors, face_colors)
    except ValueError as exc:
        raise MeshParseError(str(exc)) from None


def _obj_vertex_index(token: str, lineno: int, n_vertices: int) -> int:
    head = token.split("/")[0]
    try:
        idx = int(head)
    except ValueError:
        raise MeshParseError(f"OBJ line {lineno}: bad face index {token!r}") from None
    if idx <= 0:
        raise MeshParseError(f"OBJ line {lineno}: face indices must be positive (1-based)")
    if idx > n_vertices:
        raise MeshParseError(f"OBJ line {lineno}: face index {idx} beyond vertex count")
    return idx - 1


def parse_obj(text: str) -> TriMesh:
    """Parse OBJ text carrying 6-component colored vertices.

    Vertex lines are ``v x y z r g b`` with colors as 0..1 reals, quantized
    to 0..255 by round(c * 255).  Faces use 1-based indices and must be
    triangles.  Plain ``v x y z`` geometry raises ColorlessMeshError.
    """
    positions = []
    colors = []
    raw_faces = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        toks = line.split()
        if not toks:
            continue
        if toks[0] == "v":
            vals = toks[1:]
            if len(vals) not in (3, 6):
                raise MeshParseError(
                    f"OBJ line {lineno}: vertex must be 'v x y z' or 'v x y z r g b'")
            try:
                nums = [float(v) for v in vals]
            except ValueError:
                raise MeshParseError(f"OBJ line {lineno}: bad vertex number") from None
            if not all(np.isfinite(nums)):
                raise MeshParseError(f"OBJ line {lineno}: non-finite vertex coordinate")
            positions.append(nums[:3])
            if len(vals) == 6:
                rgb = nums[3:]
                if any(c < 0.0 or c > 1.0 for c in rgb):
                    raise MeshParseError(f"OBJ line {lineno}: vertex color outside 0..1")
                colors.append([round(c * 255.0) for c in rgb])
            else:
                colors.append(None)
        elif toks[0] == "f":
            if len(toks) != 4:
                raise MeshParseError(
                    f"OBJ line {lineno}: only triangular faces are supported")
            raw_faces.append((toks[1:], lineno))

    n = len(positions)
    faces = [[_obj_vertex_index(t, lineno, n) for t in toks]
             for toks, lineno in raw_faces]
    have_color = [c is not None for c in colors]
    if positions and not any(have_color):
        raise ColorlessMeshError(
            "OBJ has no vertex colors; damage classification requires "
            "'v x y z r g b' vertices")
    if any(have_color) and not all(have_color):
        raise MeshParseError("OBJ mixes colored and colorless vertices")

    positions_arr = np.asarray(positions, dtype=np.float64).reshape(-1, 3)
    colors_arr = np.asarray(colors, dtype=np.int64).reshape(-1, 3) if positions else np.zeros((0, 3), np.int64)
    faces_arr = np.asarray(faces, dtype=np.int64).reshape(-1, 3) if faces else np.zeros((0, 3), np.int64)
    return TriMesh(positions_arr, faces_arr, colors_arr)


DAMAGED_FACE_COLOR = (0, 255, 0)
UNDAMAGED_FACE_COLOR = (255, 255, 255)


def _resolve_face_colors(mesh: TriMesh, labeling, damaged_color, undamaged_color):
    if labeling is None:
        return mesh.face_colors
    ids = np.asarray(getattr(labeling, "face_ids", labeling), dtype=np.int64).reshape(-1)
    if ids.size and (ids.min() < 0 or ids.max() >= mesh.n_faces):
        raise ValueError("labeling face id out of range for this mesh")
    if mesh.face_colors is not None:
        face_colors = mesh.face_colors.copy()
    else:
        face_colors = np.tile(np.asarray(undamaged_color, dtype=np.uint8), (mesh.n_faces, 1))
    face_colors[ids] = np.asarray(damaged_color, dtype=np.uint8)
    return face_colors


def write_ply(mesh: TriMesh, labeling=None, encoding: str = "binary",
              damaged_color=DAMAGED_FACE_COLOR,
              undamaged_color=UNDAMAGED_FACE_COLOR) -> bytes:
    """Serialize a mesh to PLY bytes, ASCII or binary little-endian.

    When ``labeling`` is given (a DamageLabeling or an iterable of face
    ids), per-face colors are emitted with the listed faces painted
    ``damaged_color``.  Per-face output colors leave shared vertices
    untouched, so the damage marking cannot bleed into neighbor faces.
    Binary output uses float32 positions, uint8 colors, and int32 indices.
    """
    if encoding not in ("ascii", "binary"):
        raise ValueError(f"encoding must be 'ascii' or 'binary', got {encoding!r}")
    face_colors = _resolve_face_colors(mesh, labeling, damaged_color, undamaged_color)

    header = ["ply"]
    header.append("format ascii 1.0" if encoding == "ascii" else "format binary_little_endian 1.0")
    header.append(f"element vertex {mesh.n_vertices}")
    header += ["property float x", "property float y", "property float z"]
    if mesh.colors is not None:
        header += ["property uchar red", "property uchar green", "property uchar blue"]
    header.append(f"element face {mesh.n_faces}")
    header.append("property list uchar int vertex_indices")
    if face_colors is not None:
        header += ["property uchar red", "property uchar green", "property uchar blue"]
    header.append("end_header")
    head = ("\n".join(header) + "\n").encode("ascii")

    if encoding == "binary":
        vfields = [("x", "<f4"), ("y", "<f4"), ("z", "<f4")]
        if mesh.colors is not None:
            vfields += [("red", "u1"), ("green", "u1"), ("blue", "u1")]
        varr = np.zeros(mesh.n_vertices, dtype=np.dtype(vfields))
        varr["x"] = mesh.vertices[:, 0]
        varr["y"] = mesh.vertices[:, 1]
        varr["z"] = mesh.vertices[:, 2]
        if mesh.colors is not None:
            varr["red"] = mesh.colors[:, 0]
            varr["green"] = mesh.colors[:, 1]
            varr["blue"] = mesh.colors[:, 2]
        ffields = [("n", "u1"), ("idx", "<i4", (3,))]
        if face_colors is not None:
            ffields += [("red", "u1"), ("green", "u1"), ("blue", "u1")]
        farr = np.zeros(mesh.n_faces, dtype=np.dtype(ffields))
        farr["n"] = 3
        farr["idx"] = mesh.faces
        if face_colors is not None:
            farr["red"] = face_colors[:, 0]
            farr["green"] = face_colors[:, 1]
            farr["blue"] = face_colors[:, 2]
        return head + varr.tobytes() + farr.tobytes()

    lines = []
    for i in range(mesh.n_vertices):
        x, y, z = mesh.vertices[i]
        line = f"{x:.9g} {y:.9g} {z:.9g}"
        if mesh.colors is not None:
            r, g, b = mesh.colors[i]
            line += f" {r} {g} {b}"
        lines.append(line)
    for i in range(mesh.n_faces):
        a, b, c = mesh.faces[i]
        line = f"3 {a} {b} {c}"
        if face_colors is not None:
            r, g, bl = face_colors[i]
            line += f" {r} {g} {bl}"
        lines.append(line)
    body = ("\n".join(lines) + "\n").encode("ascii") if lines else b""
    return head + body


def load_mesh(path) -> TriMesh:
    """Read a mesh file, dispatching on the .ply/.obj extension."""
    p = Path(path)
    suffix = p.suffix.lower()
    if suffix == ".ply":
        return parse_ply(p.read_bytes())
    if suffix == ".obj":
        return parse_obj(p.read_text(encoding="utf-8"))
    raise MeshParseError(f"unrecognized mesh extension {suffix!r} (expected .ply or .obj)")


def save_ply(mesh: TriMesh, path, labeling=None, encoding: str = "binary",
             damaged_color=DAMAGED_FACE_COLOR,
             undamaged_color=UNDAMAGED_FACE_COLOR) -> None:
    Path(path).write_bytes(
        write_ply(mesh, labeling=labeling, encoding=encoding,
                  damaged_color=damaged_color, undamaged_color=undamaged_color))
