"""Named example varieties with default sampling windows."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .offsets import VarietyInput, x_vars
from .sampling import Window


@dataclass(frozen=True)
class Preset:
    name: str
    generators: tuple
    n: int
    window: tuple = ()
    slices: int = 0

    def variety(self) -> VarietyInput:
        return VarietyInput.from_text(list(self.generators), self.n, name=self.name)

    def polys(self):
        return self.variety().generators

    def sampling_window(self) -> Window:
        if not self.window:
            raise ValueError(f"preset {self.name!r} has no sampling window")
        return Window(tuple((Fraction(a), Fraction(b)) for a, b in self.window))

    @property
    def variables(self):
        return x_vars(self.n)


PRESETS = {
    p.name: p
    for p in [
        Preset("circle", ("x1^2+x2^2-1",), 2, (("-3/2", "3/2"), ("-3/2", "3/2")), 100),
        Preset("ellipse", ("x1^2+4*x2^2-4",), 2, (("-5/2", "5/2"), ("-3/2", "3/2")), 200),
        Preset("parabola", ("x2-x1^2",), 2, (("-2", "2"), ("-1", "4")), 100),
        Preset("cardioid", ("(x1^2+x2^2+x1)^2-x1^2-x2^2",), 2, (("-5/2", "1"), ("-2", "2")), 200),
        Preset("rose3", ("(x1^2+x2^2)^2+x1*(3*x2^2-x1^2)",), 2, (("-3/2", "3/2"), ("-3/2", "3/2")), 200),
        Preset("trott", ("144*(x1^4+x2^4)-225*(x1^2+x2^2)+350*x1^2*x2^2+81",), 2,
               (("-1", "1"), ("-1", "1")), 400),
        Preset("viviani", ("x1^2+x2^2+x3^2-4", "(x1-1)^2+x2^2-1"), 3),
    ]
}


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None
