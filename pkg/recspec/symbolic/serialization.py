from typing import List

from recspec.symbolic.exceptions import InvalidWordError
from recspec.symbolic.schemas import SubshiftOfFiniteType


def dumps_sft(sft: SubshiftOfFiniteType) -> str:
    """
    Adjacency-list text of a subshift.

    First line is the alphabet size, then one "i j" line per allowed
    transition.

    :param sft: the subshift.
    :return: text form.
    """
    lines = [str(sft.alphabet_size)]
    for source in range(sft.alphabet_size):
        lines.extend(f"{source} {target}" for target in sft.successors(source))
    return "\n".join(lines) + "\n"


def loads_sft(text: str) -> SubshiftOfFiniteType:
    """
    Parse the adjacency-list text of a subshift.

    :param text: text produced by dumps_sft.
    :raises InvalidWordError: on malformed lines.
    :return: the subshift.
    """
    lines: List[str] = [
        line.strip() for line in text.splitlines() if line.strip() and not line.startswith("#")
    ]
    if not lines:
        raise InvalidWordError("Empty subshift description.")
    size = int(lines[0])
    matrix = [[0] * size for _ in range(size)]
    for line in lines[1:]:
        parts = line.split()
        if len(parts) != 2:
            raise InvalidWordError(f"Malformed transition line {line!r}.")
        source, target = int(parts[0]), int(parts[1])
        matrix[source][target] = 1
    return SubshiftOfFiniteType(alphabet_size=size, transitions=matrix)
