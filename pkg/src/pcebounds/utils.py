"""Utilities for the main pcebounds package."""
from itertools import zip_longest


def iter_wrapper(possible_iter):
    """Ensures that the argument can be treated as an iterable of names.

    Strings are names, not iterables of characters.

    :param possible_iter: A name, ``None`` or an iterable of names.

    :return: A guaranteed iterable.
    """
    if possible_iter is None:
        return
    if isinstance(possible_iter, str):
        yield possible_iter
        return

    try:
        yield from possible_iter
    except TypeError:
        yield possible_iter


def zip_strict(*iters):
    """Zip iterables and ensure that they have equal lengths.

    :param \\*iters: Any number of iterables.

    :return: An iterable through tuples of the ingoing iterables.

    :raises ValueError: if the iterables have different lengths.
    """
    fill = object()

    for zipped in zip_longest(*iters, fillvalue=fill):
        if fill in zipped:
            raise ValueError("Iterables have different lengths")

        yield zipped


def value_key(value):
    """Sort key giving integer and string values one total order.

    Integers sort before strings, each group in its natural order.
    """
    if isinstance(value, str):
        return (1, 0, value)

    return (0, value, "")


def to_mask(items, index):
    """Encode a set of names as a bit mask.

    :param items: The names to encode.
    :type items: iterable[str]

    :param index: Bit position of every known name.
    :type index: dict[str, int]

    :rtype: int
    """
    mask = 0
    for item in iter_wrapper(items):
        mask |= 1 << index[item]

    return mask


def from_mask(mask, names):
    """Decode a bit mask into the names it contains, in order.

    :param mask: The bit mask.
    :type mask: int

    :param names: The name at every bit position.
    :type names: list[str]

    :rtype: tuple[str, ...]
    """
    return tuple(name for i, name in enumerate(names) if mask >> i & 1)
