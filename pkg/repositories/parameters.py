"""Plain-text parameter files of trained networks"""
from pathlib import Path

import numpy as np

from ..domain.enums.networks import OutputActivation
from ..domain.errors import ShapeMismatchError
from ..domain.networks import Mlp
from ..interfaces.repositories import ParameterRepository
from ..log_utils import RobustRdeuLogger
from ..services.nn import init_mlp


def format_header(net: Mlp) -> str:
    sizes = ",".join(str(n) for n in net.layer_sizes)
    return f"layer_sizes={sizes}; output={net.output_activation}; scale={net.output_scale!r}"


def parse_header(line: str) -> dict:
    """`# layer_sizes=3,8,1; output=identity; scale=1.0` -> dict of the three fields"""
    fields = {}
    for item in line.lstrip("#").split(";"):
        key, sep, value = item.partition("=")
        if not sep:
            continue
        fields[key.strip()] = value.strip()
    missing = {"layer_sizes", "output", "scale"} - fields.keys()
    if missing:
        raise ValueError(f"Parameter header lacks {sorted(missing)}")
    if not OutputActivation.is_valid(fields["output"]):
        raise ValueError(f"Unknown output activation in parameter header: {fields['output']}")
    return {
        "layer_sizes": tuple(int(n) for n in fields["layer_sizes"].split(",")),
        "output_activation": fields["output"],
        "output_scale": float(fields["scale"]),
    }


class FileParameterRepository(ParameterRepository):
    """One header comment line followed by one parameter per line (W0, b0, W1, b1, ...)"""

    def __init__(self):
        self.logger = RobustRdeuLogger()

    def save(self, location: str, net: Mlp) -> str:
        path = Path(location)
        path.parent.mkdir(parents=True, exist_ok=True)
        np.savetxt(path, net.parameters(), fmt="%.17g", header=format_header(net), comments="# ")
        self.logger.info(f"Wrote {net.parameter_count} parameters to {path}")
        return str(path)

    def load(self, location: str) -> Mlp:
        path = Path(location)
        with path.open(encoding="utf-8") as handle:
            header = parse_header(handle.readline())
        flat = np.loadtxt(path, comments="#", ndmin=1)
        template = init_mlp(
            header["layer_sizes"],
            seed=0,
            output_activation=header["output_activation"],
            output_scale=header["output_scale"],
        )
        if flat.size != template.parameter_count:
            raise ShapeMismatchError(
                f"{path} holds {flat.size} values but the header describes {template.parameter_count}"
            )
        return template.with_parameters(flat)
