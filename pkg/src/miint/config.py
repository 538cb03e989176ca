"""Run configuration: defaults, key-value config files, CLI override order.

A config file is plain KEY=VALUE lines ('#' comments allowed).  Values given
on the command line always win.  The effective configuration is embedded in
every output object so a run can be reproduced exactly.
"""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, fields

ENV_CONFIG = "MIINT_CONFIG"

_KEYS = {
    "C": int,
    "D": int,
    "N": int,
    "M": int,
    "FD_H": float,
    "TOL": float,
    "FD_TOL": float,
    "FORM": str,
    "R": int,
    "S": int,
    "Z_RE": float,
    "Z_IM": float,
    "FORMAT": str,
    "THREADS": int,
}

_ATTRS = {
    "C": "C",
    "D": "D",
    "N": "N",
    "M": "M",
    "FD_H": "fd_h",
    "TOL": "tol",
    "FD_TOL": "fd_tol",
    "FORM": "form",
    "R": "r",
    "S": "s",
    "Z_RE": "z_re",
    "Z_IM": "z_im",
    "FORMAT": "format",
    "THREADS": "threads",
}


@dataclass
class RunConfig:
    C: int = 40
    D: int = 400
    N: int = 120
    M: int = 128
    fd_h: float = 1e-3
    tol: float = 1e-6
    fd_tol: float = 1e-4
    form: str = "delta"
    r: int = 10
    s: int = 10
    z_re: float = 0.0
    z_im: float = 2.0
    format: str = "json"
    threads: int = 1

    @property
    def z(self) -> complex:
        return complex(self.z_re, self.z_im)

    def to_dict(self) -> dict:
        return asdict(self)

    def apply_file(self, path: str) -> None:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ValueError(f"{path}:{lineno}: expected KEY=VALUE")
                key, val = (part.strip() for part in line.split("=", 1))
                key = key.upper()
                if key not in _KEYS:
                    raise ValueError(f"{path}:{lineno}: unknown key {key}")
                setattr(self, _ATTRS[key], _KEYS[key](val))

    def apply_overrides(self, ns) -> None:
        """Copy explicitly-set CLI attributes (flags win over file values)."""
        for f in fields(self):
            cli_val = getattr(ns, f.name, None)
            if cli_val is not None:
                setattr(self, f.name, cli_val)


def load_config(path: str | None, ns=None) -> RunConfig:
    """Defaults, then env-var config path, then explicit path, then flags."""
    cfg = RunConfig()
    env_path = os.environ.get(ENV_CONFIG)
    if env_path and os.path.exists(env_path):
        cfg.apply_file(env_path)
    if path:
        cfg.apply_file(path)
    if ns is not None:
        cfg.apply_overrides(ns)
    return cfg
