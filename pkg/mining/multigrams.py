import math
from typing import List, NamedTuple, Sequence, Tuple

from utils.exceptions import ConfigError

Shape = Tuple[int, int]

# (source segment length, target segment length)
DEFAULT_SHAPES: Tuple[Shape, ...] = ((1, 0), (0, 1), (1, 1), (1, 2), (2, 1))
ENUMERATION_MAX_LENGTH = 6
NEG_INF = float("-inf")


class Multigram(NamedTuple):
    """A paired (source segment, target segment) unit of character alignment."""
    src_seg: str
    tgt_seg: str

    @property
    def shape(self) -> Shape:
        return len(self.src_seg), len(self.tgt_seg)

    def __str__(self):
        return f"{self.src_seg}:{self.tgt_seg}"


def validate_shapes(shapes: Sequence[Shape]) -> Tuple[Shape, ...]:
    shapes = tuple(tuple(s) for s in shapes)
    if not shapes:
        raise ConfigError("At least one multigram shape is required.")
    for shape in shapes:
        if shape not in DEFAULT_SHAPES:
            raise ConfigError(f"Multigram shape {shape} is not one of {DEFAULT_SHAPES}.")
    if len(set(shapes)) != len(shapes):
        raise ConfigError("Multigram shapes must not repeat.")
    return shapes


def format_shapes(shapes: Sequence[Shape]) -> str:
    return ",".join(f"{a}:{b}" for a, b in shapes)


def parse_shapes(text: str) -> Tuple[Shape, ...]:
    try:
        shapes = [tuple(int(x) for x in item.split(":")) for item in text.split(",") if item]
    except ValueError:
        raise ConfigError(f"Cannot parse multigram shapes '{text}'; expected e.g. 1:0,0:1,1:1.")
    return validate_shapes(shapes)


def logaddexp(a: float, b: float) -> float:
    if a == NEG_INF:
        return b
    if b == NEG_INF:
        return a
    if a > b:
        return a + math.log1p(math.exp(b - a))
    return b + math.log1p(math.exp(a - b))


def safe_log(x: float) -> float:
    return math.log(x) if x > 0.0 else NEG_INF


def enumerate_alignments(e: str, f: str, shapes: Sequence[Shape] = DEFAULT_SHAPES) -> List[List[Multigram]]:
    """
    Lists every multigram sequence whose concatenated segments spell `e` and `f`.

    Exhaustive and exponential; intended as a reference for small words only.

    Raises:
        ConfigError: If either word is longer than 6 characters.
    """
    if len(e) > ENUMERATION_MAX_LENGTH or len(f) > ENUMERATION_MAX_LENGTH:
        raise ConfigError(
            f"Refusing to enumerate alignments of words longer than {ENUMERATION_MAX_LENGTH} characters."
        )
    shapes = validate_shapes(shapes)
    results = []

    def extend(i, j, prefix):
        if i == len(e) and j == len(f):
            results.append(list(prefix))
            return
        for di, dj in shapes:
            if i + di <= len(e) and j + dj <= len(f):
                prefix.append(Multigram(e[i:i + di], f[j:j + dj]))
                extend(i + di, j + dj, prefix)
                prefix.pop()

    extend(0, 0, [])
    return results
