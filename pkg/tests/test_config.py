import pytest

from hgcn.common import ValidationError
from hgcn.config import PipelineConfig


def test_defaults():
    cfg = PipelineConfig()
    assert (cfg.fft_size, cfg.win_length, cfg.hop) == (512, 512, 128)
    assert cfg.eps_a == 0.0 and cfg.eps_b == pytest.approx(4 / 3)
    assert cfg.vad_count == 24 and cfg.log_floor == 1e-8


def test_round_trip(tmp_path):
    cfg = PipelineConfig(hop=256, eps_b=1.0, valley_rule="swapped", vad_override="zero")
    cfg.save(tmp_path / "c.cfg")
    assert PipelineConfig.load(tmp_path / "c.cfg") == cfg


def test_comments_and_blanks():
    cfg = PipelineConfig.loads("# header\n\nvad_count = 30  # more strict\n")
    assert cfg.vad_count == 30


@pytest.mark.parametrize("text", ["bogus=1", "hop", "hop=abc", "hop=1000",
                                  "valley_rule=other", "log_floor=0", "vad_override=maybe"])
def test_rejects(text):
    with pytest.raises(ValidationError):
        PipelineConfig.loads(text)
