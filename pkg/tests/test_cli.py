import json
import subprocess
import sys

import pytest

from elgamal_image import cipher, cli, keys
from elgamal_image.imagecodec import load_image, save_image


@pytest.fixture
def keyfiles(tmp_path):
    pub, priv = tmp_path / "k.pub", tmp_path / "k.priv"
    assert cli.run(["keygen", "--bits", "64", "--out-pub", str(pub),
                    "--out-priv", str(priv), "--seed", "1"]) == 0
    return pub, priv


@pytest.mark.parametrize("name", ["gray64.png", "rgb64.png", "rgb128.jpg"])
@pytest.mark.parametrize("mode", ["paper", "perpixel"])
def test_pipeline_roundtrip(tmp_path, fixture_dir, keyfiles, name, mode):
    pub, priv = keyfiles
    eic, out, ref = tmp_path / "c.eic", tmp_path / "out.png", tmp_path / "ref.png"
    assert cli.run(["encrypt", "--pub", str(pub), "--in", str(fixture_dir / name),
                    "--out", str(eic), "--mode", mode, "--seed", "3"]) == 0
    assert cli.run(["decrypt", "--priv", str(priv), "--in", str(eic), "--out", str(out)]) == 0
    save_image(load_image(fixture_dir / name), ref)
    assert out.read_bytes() == ref.read_bytes()
    assert load_image(out) == load_image(fixture_dir / name)


def test_keygen_warning_text(tmp_path, capsys):
    cli.run(["keygen", "--bits", "32", "--out-pub", str(tmp_path / "a"),
             "--out-priv", str(tmp_path / "b"), "--seed", "0"])
    err = capsys.readouterr().err
    assert "WARNING" in err and "secure" in err


def test_keygen_no_warning_at_128(tmp_path, capsys):
    cli.run(["keygen", "--bits", "128", "--out-pub", str(tmp_path / "a"),
             "--out-priv", str(tmp_path / "b"), "--seed", "0"])
    assert "WARNING" not in capsys.readouterr().err


def test_keygen_too_small(tmp_path, capsys):
    code = cli.run(["keygen", "--bits", "8", "--out-pub", str(tmp_path / "a"),
                    "--out-priv", str(tmp_path / "b")])
    assert code == 3
    assert "key-too-small" in capsys.readouterr().err


def test_seeded_pipeline_is_byte_identical(tmp_path, fixture_dir):
    outputs = []
    for run in range(2):
        d = tmp_path / str(run)
        d.mkdir()
        assert cli.run(["keygen", "--bits", "64", "--out-pub", str(d / "k.pub"),
                        "--out-priv", str(d / "k.priv"), "--seed", "11"]) == 0
        assert cli.run(["encrypt", "--pub", str(d / "k.pub"), "--in",
                        str(fixture_dir / "gray64.png"), "--out", str(d / "c.eic"),
                        "--mode", "perpixel", "--seed", "12"]) == 0
        outputs.append([(d / f).read_bytes() for f in ("k.pub", "k.priv", "c.eic")])
    assert outputs[0] == outputs[1]


def test_small_modulus_exit_3(tmp_path, fixture_dir, capsys):
    pub = tmp_path / "small.pub"
    # 227 = 2*113 + 1, primitive root 2
    keys.save_key(pub, keys.PublicKey(p=227, r=2, s=4))
    code = cli.run(["encrypt", "--pub", str(pub), "--in", str(fixture_dir / "gray64.png"),
                    "--out", str(tmp_path / "c.eic")])
    assert code == 3
    assert "modulus-too-small" in capsys.readouterr().err


def test_usage_errors(tmp_path, capsys):
    assert cli.run([]) == 2
    assert cli.run(["encrypt", "--bogus"]) == 2
    assert cli.run(["decrypt", "--in", "x"]) == 2
    assert cli.run(["encrypt", "--pub", "a", "--in", "b", "--out", "c", "--mode", "ecb"]) == 2
    assert "usage error" in capsys.readouterr().err


def test_missing_file_exit_4(tmp_path, keyfiles, capsys):
    pub, _ = keyfiles
    code = cli.run(["encrypt", "--pub", str(pub), "--in", str(tmp_path / "none.png"),
                    "--out", str(tmp_path / "c.eic")])
    assert code == 4
    assert "none.png" in capsys.readouterr().err


def test_corrupt_container_exit_4(tmp_path, keyfiles, capsys):
    _, priv = keyfiles
    bad = tmp_path / "bad.eic"
    bad.write_bytes(b"EIC0" + bytes(20))
    assert cli.run(["decrypt", "--priv", str(priv), "--in", str(bad),
                    "--out", str(tmp_path / "o.png")]) == 4
    assert "container-format" in capsys.readouterr().err


def test_wrong_key_exit_3(tmp_path, fixture_dir, keyfiles, capsys):
    pub, _ = keyfiles
    other = tmp_path / "o"
    other.mkdir()
    cli.run(["keygen", "--bits", "64", "--out-pub", str(other / "p"),
             "--out-priv", str(other / "q"), "--seed", "99"])
    eic = tmp_path / "c.eic"
    cli.run(["encrypt", "--pub", str(pub), "--in", str(fixture_dir / "gray64.png"),
             "--out", str(eic)])
    assert cli.run(["decrypt", "--priv", str(other / "q"), "--in", str(eic),
                    "--out", str(tmp_path / "o.png")]) == 3
    assert "key-mismatch" in capsys.readouterr().err


def test_public_key_given_as_private(tmp_path, keyfiles, capsys):
    pub, _ = keyfiles
    eic = tmp_path / "c.eic"
    eic.write_bytes(b"")
    assert cli.run(["decrypt", "--priv", str(pub), "--in", str(eic),
                    "--out", str(tmp_path / "o.png")]) == 4
    assert "PrivateKey" in capsys.readouterr().err


def test_decrypt_refuses_jpeg_without_override(tmp_path, fixture_dir, keyfiles, capsys):
    pub, priv = keyfiles
    eic = tmp_path / "c.eic"
    cli.run(["encrypt", "--pub", str(pub), "--in", str(fixture_dir / "gray64.png"),
             "--out", str(eic)])
    assert cli.run(["decrypt", "--priv", str(priv), "--in", str(eic),
                    "--out", str(tmp_path / "o.jpg")]) == 4
    assert "lossy-output-refused" in capsys.readouterr().err
    assert cli.run(["decrypt", "--priv", str(priv), "--in", str(eic),
                    "--out", str(tmp_path / "o.jpg"), "--allow-lossy"]) == 0


def test_preview(tmp_path, fixture_dir, keyfiles):
    pub, _ = keyfiles
    eic, pre = tmp_path / "c.eic", tmp_path / "pre.png"
    cli.run(["encrypt", "--pub", str(pub), "--in", str(fixture_dir / "rgb64.png"),
             "--out", str(eic), "--mode", "perpixel", "--seed", "0"])
    assert cli.run(["preview", "--in", str(eic), "--out", str(pre)]) == 0
    assert load_image(pre) == cipher.cipher_preview(cipher.read_cipher(eic))


def test_analyze_report(tmp_path, fixture_dir):
    pub, priv = tmp_path / "k.pub", tmp_path / "k.priv"
    cli.run(["keygen", "--bits", "20", "--out-pub", str(pub), "--out-priv", str(priv),
             "--seed", "4"])
    eic, rep = tmp_path / "c.eic", tmp_path / "r.json"
    img = fixture_dir / "gray64.png"
    cli.run(["encrypt", "--pub", str(pub), "--in", str(img), "--out", str(eic),
             "--mode", "perpixel", "--seed", "5"])
    assert cli.run(["analyze", "--in", str(img), "--cipher", str(eic), "--pub", str(pub),
                    "--report", str(rep)]) == 0
    doc = json.loads(rep.read_text())
    fields = {"histogram", "entropy_bits", "correlation_h", "correlation_v", "correlation_d",
              "recovered_exponent", "elapsed_ms"}
    assert set(doc["plain"]) == fields == set(doc["cipher"])
    assert doc["cipher"]["recovered_exponent"] == keys.load_key(priv).a
    assert doc["cipher"]["entropy_bits"][0] > doc["plain"]["entropy_bits"][0]
    assert sum(doc["plain"]["histogram"][0]) == 64 * 64


def test_analyze_plain_only(tmp_path, fixture_dir):
    rep = tmp_path / "r.json"
    assert cli.run(["analyze", "--in", str(fixture_dir / "rgb64.png"),
                    "--report", str(rep)]) == 0
    doc = json.loads(rep.read_text())
    assert doc["cipher"] is None and len(doc["plain"]["entropy_bits"]) == 3


def test_analyze_dimension_mismatch(tmp_path, fixture_dir, keyfiles, capsys):
    pub, _ = keyfiles
    eic = tmp_path / "c.eic"
    cli.run(["encrypt", "--pub", str(pub), "--in", str(fixture_dir / "gray64.png"),
             "--out", str(eic)])
    assert cli.run(["analyze", "--in", str(fixture_dir / "rgb64.png"), "--cipher", str(eic),
                    "--report", str(tmp_path / "r.json")]) == 4
    assert "invalid-comparison" in capsys.readouterr().err


def test_analyze_refuses_large_modulus(tmp_path, fixture_dir, keyfiles, capsys):
    pub, _ = keyfiles
    eic = tmp_path / "c.eic"
    cli.run(["encrypt", "--pub", str(pub), "--in", str(fixture_dir / "gray64.png"),
             "--out", str(eic)])
    assert cli.run(["analyze", "--in", str(fixture_dir / "gray64.png"), "--cipher", str(eic),
                    "--pub", str(pub), "--report", str(tmp_path / "r.json")]) == 3
    assert "refuse-large-modulus" in capsys.readouterr().err


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "elgamal_image", "keygen", "--bits", "16",
                           "--out-pub", str(tmp_path / "a"), "--out-priv", str(tmp_path / "b"),
                           "--seed", "1"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert isinstance(keys.load_key(tmp_path / "a"), keys.PublicKey)
    proc = subprocess.run([sys.executable, "-m", "elgamal_image", "--help"],
                          capture_output=True, text=True)
    assert "keygen" in proc.stdout
    assert proc.returncode == 0


def test_help_returns_zero(capsys):
    assert cli.run(["--help"]) == 0
    assert cli.run(["keygen", "--help"]) == 0
    assert "INSECURE" in capsys.readouterr().out
