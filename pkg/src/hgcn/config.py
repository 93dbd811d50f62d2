"""Pipeline settings and their key=value file format."""

import dataclasses
from dataclasses import dataclass

from .common import LOG_FLOOR, ValidationError
from .harmonic import VALLEY_RULES
from .sed import EPS_A, EPS_B, VAD_COUNT
from .stft import StftConfig

VAD_OVERRIDES = ("none", "zero", "one")


@dataclass
class PipelineConfig:
    fft_size: int = 512
    win_length: int = 512
    hop: int = 128
    valley_rule: str = "midpoint"
    eps_a: float = EPS_A
    eps_b: float = EPS_B
    vad_count: int = VAD_COUNT
    log_floor: float = LOG_FLOOR
    vad_override: str = "none"

    def __post_init__(self):
        self.validate()

    def validate(self):
        self.stft_config()
        if self.valley_rule not in VALLEY_RULES:
            raise ValidationError(f"valley_rule must be one of {VALLEY_RULES}")
        if self.vad_override not in VAD_OVERRIDES:
            raise ValidationError(f"vad_override must be one of {VAD_OVERRIDES}")
        if self.log_floor <= 0:
            raise ValidationError("log_floor must be positive")
        if self.vad_count < 0:
            raise ValidationError("vad_count must be non-negative")

    def stft_config(self):
        return StftConfig(fft_size=self.fft_size, win_length=self.win_length, hop=self.hop)

    def dumps(self):
        return "".join(f"{f.name}={getattr(self, f.name)}\n" for f in dataclasses.fields(self))

    def save(self, path):
        with open(path, "w") as fh:
            fh.write(self.dumps())

    @classmethod
    def loads(cls, text):
        types = {f.name: f.type for f in dataclasses.fields(cls)}
        casts = {"int": int, "float": float, "str": str, int: int, float: float, str: str}
        values = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = (part.strip() for part in line.partition("="))
            if not sep:
                raise ValidationError(f"config line {lineno}: expected key=value")
            if key not in types:
                raise ValidationError(f"config line {lineno}: unknown key '{key}'")
            try:
                values[key] = casts[types[key]](value)
            except ValueError as exc:
                raise ValidationError(f"config line {lineno}: bad value for {key}: {value}") from exc
        return cls(**values)

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.loads(fh.read())
