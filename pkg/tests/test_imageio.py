import numpy as np
import pytest
from PIL import Image

from maxentaug.errors import InvalidParameterError
from maxentaug.imageio import load_image, save_png


def test_png_round_trip_rgb(tmp_path):
    gen = np.random.default_rng(0)
    u8 = (gen.random((10, 12, 3)) * 255).astype(np.uint8)
    src = tmp_path / "in.png"
    Image.fromarray(u8).save(src)
    x = load_image(src)
    assert x.dtype == np.float32
    assert x.shape == (10, 12, 3)
    assert x.min() >= 0.0 and x.max() <= 1.0
    dst = tmp_path / "out.png"
    save_png(dst, x)
    assert np.array_equal(np.asarray(Image.open(dst)), u8)


def test_grayscale_keeps_one_channel(tmp_path):
    u8 = np.arange(64, dtype=np.uint8).reshape(8, 8)
    src = tmp_path / "g.png"
    Image.fromarray(u8, mode="L").save(src)
    x = load_image(src)
    assert x.shape == (8, 8, 1)
    dst = tmp_path / "g2.png"
    save_png(dst, x)
    assert np.array_equal(np.asarray(Image.open(dst)), u8)


def test_jpeg_decodes(tmp_path):
    u8 = np.full((16, 16, 3), 128, dtype=np.uint8)
    src = tmp_path / "j.jpg"
    Image.fromarray(u8).save(src, format="JPEG")
    x = load_image(src)
    assert x.shape == (16, 16, 3)


def test_unsupported_format_rejected(tmp_path):
    src = tmp_path / "b.bmp"
    Image.fromarray(np.zeros((4, 4, 3), dtype=np.uint8)).save(src, format="BMP")
    with pytest.raises(InvalidParameterError):
        load_image(src)


def test_corrupt_file_rejected(tmp_path):
    src = tmp_path / "c.png"
    src.write_bytes(b"\x89PNG\r\n\x1a\ngarbage")
    with pytest.raises(InvalidParameterError):
        load_image(src)


def test_out_of_range_rejected(tmp_path):
    with pytest.raises(InvalidParameterError):
        save_png(tmp_path / "o.png", np.full((4, 4, 3), 1.5, dtype=np.float32))
