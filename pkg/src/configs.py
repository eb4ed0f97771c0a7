"""
Subaisle Configurations
The six vertical and three horizontal edge configurations with their lengths,
end-degree contributions and connectivity; the alphabet of the DP and the
brute-force oracle
"""

from dataclasses import dataclass
from enum import Enum
from typing import List, NamedTuple, Tuple

from errors import PreconditionError


class VerticalConfig(Enum):
    I = 'single traversal'
    II = 'top return'
    III = 'bottom return'
    IV = 'largest gap'
    V = 'double traversal'
    VI = 'none'

    @property
    def order(self) -> int:
        return _VERTICAL_ORDER[self]


_VERTICAL_ORDER = {config: idx for idx, config in enumerate(VerticalConfig)}


class HorizontalConfig(Enum):
    NONE = 0
    SINGLE = 1
    DOUBLE = 2

    @property
    def multiplicity(self) -> int:
        return self.value


class BlockShape(NamedTuple):
    """What a neighbouring vertex sees of a block: end degrees and whether the ends are joined"""
    bottom_degree: int
    top_degree: int
    connects_ends: bool


@dataclass(frozen=True)
class Subaisle:
    """One block of one aisle: its length d and the sorted distinct item offsets inside it"""

    length: int
    offsets: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.length <= 0:
            raise PreconditionError(f"subaisle length must be positive, got {self.length}")
        ordered = tuple(sorted(set(self.offsets)))
        for offset in ordered:
            if not 0 < offset < self.length:
                raise PreconditionError(f"offset {offset} outside the open interval (0, {self.length})")
        object.__setattr__(self, 'offsets', ordered)

    @property
    def is_empty(self) -> bool:
        return not self.offsets

    @property
    def segment_lengths(self) -> Tuple[int, ...]:
        """Lengths of the segments between consecutive points, bottom to top"""
        points = (0,) + self.offsets + (self.length,)
        return tuple(upper - lower for lower, upper in zip(points, points[1:]))


@dataclass(frozen=True)
class ConfigEffect:
    """
    Realization of one configuration

    degree_parity is (top, bottom), 1 for odd; multiplicities are per segment,
    bottom to top (a single entry for horizontal configurations).
    """

    length: int
    degree_parity: Tuple[int, int]
    connects_ends: bool
    multiplicities: Tuple[int, ...]
    bottom_degree: int
    top_degree: int

    @property
    def shape(self) -> BlockShape:
        return BlockShape(self.bottom_degree, self.top_degree, self.connects_ends)


def subaisle_of(instance, aisle: int, block: int) -> Subaisle:
    """Subaisle for block `block` of aisle `aisle` of a WarehouseInstance"""
    offsets = [item.offset for item in instance.items if item.aisle == aisle and item.block == block]
    return Subaisle(length=instance.block_lengths[block - 1], offsets=tuple(offsets))


def _effect_from(multiplicities: Tuple[int, ...], segments: Tuple[int, ...]) -> ConfigEffect:
    bottom, top = multiplicities[0], multiplicities[-1]
    return ConfigEffect(
        length=sum(mult * seg for mult, seg in zip(multiplicities, segments)),
        degree_parity=(top % 2, bottom % 2),
        connects_ends=all(mult >= 1 for mult in multiplicities),
        multiplicities=multiplicities,
        bottom_degree=bottom,
        top_degree=top,
    )


def _largest_gap_index(segments: Tuple[int, ...]) -> int:
    # topmost among the longest segments
    best = 0
    for idx, seg in enumerate(segments):
        if seg >= segments[best]:
            best = idx
    return best


def vertical_config_effect(subaisle: Subaisle, config: VerticalConfig) -> ConfigEffect:
    """
    Segment multiplicities, length and end behaviour of a vertical configuration

    Args:
        subaisle: Block length and item offsets
        config: One of the six vertical configurations

    Returns:
        ConfigEffect; on an empty subaisle II and III collapse to the empty pattern

    Raises:
        PreconditionError for VI on a subaisle holding items, or IV on an empty one

    Example:
        >>> vertical_config_effect(Subaisle(10, (3, 7)), VerticalConfig.IV).length
        12
    """
    segments = subaisle.segment_lengths
    count = len(segments)

    if config is VerticalConfig.I:
        pattern = (1,) * count
    elif config is VerticalConfig.V:
        pattern = (2,) * count
    elif config is VerticalConfig.VI:
        if not subaisle.is_empty:
            raise PreconditionError("configuration VI leaves the items of a non-empty subaisle unvisited")
        pattern = (0,) * count
    elif subaisle.is_empty:
        if config is VerticalConfig.IV:
            raise PreconditionError("configuration IV is undefined on an empty subaisle")
        pattern = (0,) * count
    elif config is VerticalConfig.II:
        pattern = (0,) + (2,) * (count - 1)
    elif config is VerticalConfig.III:
        pattern = (2,) * (count - 1) + (0,)
    else:
        gap = _largest_gap_index(segments)
        pattern = tuple(0 if idx == gap else 2 for idx in range(count))

    return _effect_from(pattern, segments)


def enumerate_vertical_configs(subaisle: Subaisle) -> List[Tuple[VerticalConfig, ConfigEffect]]:
    """
    Valid configurations of a subaisle, in order I..VI

    An empty subaisle admits I, V and VI (II and III coincide with VI there);
    a subaisle with items admits I..V.
    """
    if subaisle.is_empty:
        allowed = (VerticalConfig.I, VerticalConfig.V, VerticalConfig.VI)
    else:
        allowed = (VerticalConfig.I, VerticalConfig.II, VerticalConfig.III,
                   VerticalConfig.IV, VerticalConfig.V)
    return [(config, vertical_config_effect(subaisle, config)) for config in allowed]


def horizontal_config_effect(width: int, config: HorizontalConfig) -> ConfigEffect:
    """Effect of 0, 1 or 2 parallel edges across a gap of the given width"""
    mult = config.multiplicity
    return ConfigEffect(
        length=mult * width,
        degree_parity=(mult % 2, mult % 2),
        connects_ends=mult > 0,
        multiplicities=(mult,),
        bottom_degree=mult,
        top_degree=mult,
    )
