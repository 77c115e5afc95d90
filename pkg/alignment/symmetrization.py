from utils.exceptions import ConfigError
from .pharaoh import AlignmentLinkSet

HEURISTICS = ("none", "union", "grow-diag", "grow-diag-final")
DEFAULT_HEURISTIC = "grow-diag"

_NEIGHBORS = ((-1, 0), (0, -1), (1, 0), (0, 1), (-1, -1), (-1, 1), (1, -1), (1, 1))


def _grow_diag(alignment, union):
    aligned_src = {i for i, _ in alignment}
    aligned_tgt = {j for _, j in alignment}
    added = True
    while added:
        added = False
        for i, j in sorted(alignment):
            for di, dj in _NEIGHBORS:
                candidate = (i + di, j + dj)
                if candidate in alignment or candidate not in union:
                    continue
                if candidate[0] not in aligned_src or candidate[1] not in aligned_tgt:
                    alignment.add(candidate)
                    aligned_src.add(candidate[0])
                    aligned_tgt.add(candidate[1])
                    added = True


def _final(alignment, directional):
    aligned_src = {i for i, _ in alignment}
    aligned_tgt = {j for _, j in alignment}
    for i, j in sorted(directional):
        if (i, j) in alignment:
            continue
        if i not in aligned_src or j not in aligned_tgt:
            alignment.add((i, j))
            aligned_src.add(i)
            aligned_tgt.add(j)


def symmetrize(fwd: AlignmentLinkSet, bwd: AlignmentLinkSet, heuristic: str = DEFAULT_HEURISTIC) -> AlignmentLinkSet:
    """
    Combines the two directional alignments of one sentence pair.

    Both inputs use (source index, target index) links. Heuristics:
    - "none": the intersection.
    - "union": the union.
    - "grow-diag": start from the intersection and repeatedly add union links that
      are 8-connected neighbours of an existing link and cover a source or target
      word that is still unaligned.
    - "grow-diag-final": grow-diag, then add remaining links of each direction whose
      source or target word is still unaligned.

    The result always lies between the intersection and the union.

    Raises:
        ConfigError: If the heuristic is unknown or the sentence lengths differ.
    """
    if heuristic not in HEURISTICS:
        raise ConfigError(f"Unknown symmetrization heuristic '{heuristic}'. Use one of {', '.join(HEURISTICS)}.")
    if (fwd.src_len, fwd.tgt_len) != (bwd.src_len, bwd.tgt_len):
        raise ConfigError("Directional alignments belong to sentence pairs of different lengths.")

    intersection = set(fwd.links & bwd.links)
    union = set(fwd.links | bwd.links)
    if heuristic == "none":
        result = intersection
    elif heuristic == "union":
        result = union
    else:
        result = intersection
        _grow_diag(result, union)
        if heuristic == "grow-diag-final":
            _final(result, fwd.links)
            _final(result, bwd.links)
    return AlignmentLinkSet(frozenset(result), fwd.src_len, fwd.tgt_len)
