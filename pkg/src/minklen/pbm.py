"""Plain (P1) and raw (P4) portable bitmap I/O.

The frame travels in a header comment ``# frame xmin xmax ymin ymax``;
files without one are placed on the unit square (``[0, 1] x [0, H/W]`` when
the raster is not square, so pixels stay square).
"""

from __future__ import annotations

import numpy as np

from minklen.geometry import Frame

MAX_PIXELS = 1 << 30
_WS = b" \t\n\r\v\f"


class PBMError(ValueError):
    pass


def _header(data: bytes) -> tuple[bytes, int, int, list[str], int]:
    """Return magic, width, height, comments and the offset of the raster."""
    pos, tokens, comments = 0, [], []
    while len(tokens) < 3:
        if pos >= len(data):
            raise PBMError("truncated header")
        c = data[pos:pos + 1]
        if c in _WS:
            pos += 1
        elif c == b"#":
            end = data.find(b"\n", pos)
            end = len(data) if end < 0 else end
            comments.append(data[pos + 1:end].decode("ascii", "replace").strip())
            pos = end
        else:
            start = pos
            while pos < len(data) and data[pos:pos + 1] not in _WS and data[pos:pos + 1] != b"#":
                pos += 1
            tokens.append(data[start:pos])
    magic = tokens[0]
    if magic not in (b"P1", b"P4"):
        raise PBMError(f"unsupported magic {magic!r}")
    try:
        width, height = int(tokens[1]), int(tokens[2])
    except ValueError as exc:
        raise PBMError("non-integer dimensions") from exc
    if width < 1 or height < 1:
        raise PBMError("dimensions must be positive")
    if width * height > MAX_PIXELS:
        raise PBMError(f"image of {width}x{height} exceeds {MAX_PIXELS} pixels")
    if pos >= len(data) and magic == b"P4":
        raise PBMError("truncated payload")
    return magic, width, height, comments, pos + 1


def _frame_from(comments: list[str], width: int, height: int) -> Frame:
    for c in comments:
        parts = c.split()
        if parts and parts[0] == "frame":
            try:
                return Frame(*(float(v) for v in parts[1:]))
            except (TypeError, ValueError) as exc:
                raise PBMError(f"bad frame comment {c!r}") from exc
    return Frame(0.0, 1.0, 0.0, 1.0 if width == height else height / width)


def read_pbm(path):
    from minklen.raster import BinaryImage

    with open(path, "rb") as fh:
        data = fh.read()
    magic, width, height, comments, offset = _header(data)
    if magic == b"P4":
        stride = (width + 7) // 8
        payload = data[offset:offset + stride * height]
        if len(payload) < stride * height:
            raise PBMError("truncated payload")
        raw = np.frombuffer(payload, dtype=np.uint8).reshape(height, stride)
        bits = np.unpackbits(raw, axis=1)[:, :width].astype(bool)
    else:
        body = bytearray()
        pos = offset - 1
        while pos < len(data):
            c = data[pos:pos + 1]
            if c == b"#":
                end = data.find(b"\n", pos)
                pos = len(data) if end < 0 else end
                continue
            if c in (b"0", b"1"):
                body += c
            elif c not in _WS:
                raise PBMError(f"unexpected byte {c!r} in P1 raster")
            pos += 1
        if len(body) < width * height:
            raise PBMError("truncated payload")
        bits = (np.frombuffer(bytes(body[:width * height]), dtype=np.uint8) == ord("1")).reshape(height, width)
    try:
        return BinaryImage(bits, _frame_from(comments, width, height))
    except PBMError:
        raise
    except ValueError as exc:
        raise PBMError(str(exc)) from exc


def write_pbm(img, path, raw: bool = True) -> None:
    f = img.frame
    head = f"{'P4' if raw else 'P1'}\n# frame {f.xmin!r} {f.xmax!r} {f.ymin!r} {f.ymax!r}\n{img.width} {img.height}\n"
    with open(path, "wb") as fh:
        fh.write(head.encode("ascii"))
        if raw:
            fh.write(np.packbits(img.bits, axis=1).tobytes())
        else:
            for row in img.bits.astype(np.uint8):
                chars = "".join("01"[v] for v in row)
                for s in range(0, len(chars), 70):
                    fh.write(chars[s:s + 70].encode("ascii") + b"\n")
