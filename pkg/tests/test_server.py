"""HTTP session service: protocol, consistency, isolation, eviction."""

import json

import numpy as np
import pytest
from starlette.testclient import TestClient

from specmerge import Layer, MergeSpec, Shift, decode_pgm, encode_pgm, merge_frequency, normalize, quantize
from specmerge.cli import main
from specmerge.server import create_app


def pgm_bytes(img: np.ndarray, maxval: int = 255) -> bytes:
    raw, _ = quantize(img, maxval)
    return encode_pgm(raw, binary=True)


@pytest.fixture
def client():
    with TestClient(create_app()) as c:
        yield c


@pytest.fixture
def images(rng):
    return 0.7 * rng.random((12, 12)), 0.7 * rng.random((12, 12))


def upload(client, *payloads) -> str:
    files = [
        ("files", (f"layer{i}.pgm", data, "image/x-portable-graymap"))
        for i, data in enumerate(payloads)
    ]
    response = client.post("/sessions", files=files)
    assert response.status_code == 200, response.text
    body = response.json()
    assert set(body) == {"id"}
    return body["id"]


class TestSessionLifecycle:
    def test_healthz(self, client):
        assert client.get("/healthz").json() == {"status": "ok"}

    def test_create_and_read_state(self, client, images):
        a, b = images
        sid = upload(client, pgm_bytes(a), pgm_bytes(b))
        state = client.get(f"/sessions/{sid}").json()
        assert state["revision"] == 1
        assert state["engine"] == "frequency"
        assert state["rows"] == 12 and state["cols"] == 12
        assert [layer["coefficient"] for layer in state["layers"]] == [1.0, 1.0]
        assert [(layer["sx"], layer["sy"]) for layer in state["layers"]] == [(0.0, 0.0)] * 2

    def test_empty_upload_rejected(self, client):
        response = client.post("/sessions")
        assert response.status_code == 400
        assert response.json()["code"] == "empty_session"

    def test_corrupt_upload_rejected_with_codec_error(self, client):
        response = client.post("/sessions", files=[("files", ("x.pgm", b"P9 nope", "text/plain"))])
        assert response.status_code == 400
        body = response.json()
        assert body["code"] == "codec_error"
        assert "x.pgm" in body["message"]

    def test_mixed_sizes_padded_to_common_shape(self, client, rng):
        small = pgm_bytes(rng.random((4, 6)))
        large = pgm_bytes(rng.random((8, 5)))
        sid = upload(client, small, large)
        state = client.get(f"/sessions/{sid}").json()
        assert state["rows"] == 8 and state["cols"] == 6

    def test_unknown_session_404(self, client):
        response = client.get("/sessions/deadbeef")
        assert response.status_code == 404
        assert response.json()["code"] == "unknown_session"

    def test_png_upload_accepted(self, client, rng):
        from specmerge import encode_png

        raw, _ = quantize(rng.random((5, 5)), 255)
        sid = upload(client, encode_png(raw))
        state = client.get(f"/sessions/{sid}").json()
        assert state["rows"] == 5


class TestMutations:
    def test_patch_coefficient_bumps_revision(self, client, images):
        sid = upload(client, pgm_bytes(images[0]))
        response = client.patch(f"/sessions/{sid}/layers/0", json={"coefficient": 0.2})
        assert response.json() == {"revision": 2}

    def test_patch_shift(self, client, images):
        sid = upload(client, pgm_bytes(images[0]), pgm_bytes(images[1]))
        response = client.patch(f"/sessions/{sid}/layers/1", json={"sx": 3, "sy": -2})
        assert response.json() == {"revision": 2}
        state = client.get(f"/sessions/{sid}").json()
        assert state["layers"][1]["sx"] == 3.0
        assert state["layers"][1]["sy"] == -2.0

    def test_negative_coefficient_rejected_without_revision_change(self, client, images):
        sid = upload(client, pgm_bytes(images[0]))
        response = client.patch(f"/sessions/{sid}/layers/0", json={"coefficient": -1})
        assert response.status_code == 400
        assert response.json()["code"] == "bad_coefficient"
        assert client.get(f"/sessions/{sid}").json()["revision"] == 1

    def test_bad_layer_index_404(self, client, images):
        sid = upload(client, pgm_bytes(images[0]))
        response = client.patch(f"/sessions/{sid}/layers/5", json={"coefficient": 1})
        assert response.status_code == 404
        assert response.json()["code"] == "bad_layer"

    def test_unknown_field_rejected(self, client, images):
        sid = upload(client, pgm_bytes(images[0]))
        response = client.patch(f"/sessions/{sid}/layers/0", json={"coeficient": 1})
        assert response.status_code == 400
        assert response.json()["code"] == "invalid_request"

    def test_engine_switch(self, client, images):
        sid = upload(client, pgm_bytes(images[0]))
        response = client.put(f"/sessions/{sid}/engine", json={"engine": "spatial"})
        assert response.json() == {"revision": 2}
        assert client.get(f"/sessions/{sid}").json()["engine"] == "spatial"

    def test_invalid_engine_rejected(self, client, images):
        sid = upload(client, pgm_bytes(images[0]))
        response = client.put(f"/sessions/{sid}/engine", json={"engine": "warp"})
        assert response.status_code == 400

    def test_revisions_strictly_increase(self, client, images):
        sid = upload(client, pgm_bytes(images[0]), pgm_bytes(images[1]))
        seen = [client.get(f"/sessions/{sid}").json()["revision"]]
        seen.append(client.patch(f"/sessions/{sid}/layers/0", json={"coefficient": 0.5}).json()["revision"])
        seen.append(client.patch(f"/sessions/{sid}/layers/1", json={"sx": 1}).json()["revision"])
        seen.append(client.put(f"/sessions/{sid}/engine", json={"engine": "spatial"}).json()["revision"])
        assert seen == sorted(seen) and len(set(seen)) == len(seen)


class TestPreview:
    def test_png_preview_by_default(self, client, images):
        sid = upload(client, pgm_bytes(images[0]))
        response = client.get(f"/sessions/{sid}/preview")
        assert response.status_code == 200
        assert response.headers["content-type"] == "image/png"
        assert response.content[:8] == b"\x89PNG\r\n\x1a\n"
        assert response.headers["x-revision"] == "1"

    def test_single_layer_pgm_preview_requantizes_input(self, client, images):
        payload = pgm_bytes(images[0])
        sid = upload(client, payload)
        response = client.get(f"/sessions/{sid}/preview", params={"format": "pgm"})
        assert response.content == payload

    def test_two_identical_layers_at_half_weight_reproduce_input(self, client, images):
        payload = pgm_bytes(images[0])
        sid = upload(client, payload, payload)
        for k in range(2):
            client.patch(f"/sessions/{sid}/layers/{k}", json={"coefficient": 0.5})
        response = client.get(f"/sessions/{sid}/preview", params={"format": "pgm"})
        got = decode_pgm(response.content).samples
        want = decode_pgm(payload).samples
        assert np.abs(got.astype(int) - want.astype(int)).max() <= 1

    def test_preview_matches_library_merge(self, client, images):
        a, b = images
        sid = upload(client, pgm_bytes(a), pgm_bytes(b))
        client.patch(f"/sessions/{sid}/layers/0", json={"coefficient": 0.9})
        client.patch(f"/sessions/{sid}/layers/1", json={"coefficient": 0.3, "sx": 3, "sy": -2})
        response = client.get(f"/sessions/{sid}/preview", params={"format": "pgm"})

        layers = (
            Layer(normalize(decode_pgm(pgm_bytes(a)), "maxval"), coefficient=0.9),
            Layer(normalize(decode_pgm(pgm_bytes(b)), "maxval"), shift=Shift(3, -2), coefficient=0.3),
        )
        result = merge_frequency(MergeSpec(layers))
        raw, _ = quantize(result.image, 255)
        assert response.content == encode_pgm(raw, binary=True)

    def test_preview_cache_is_stable_within_a_revision(self, client, images):
        sid = upload(client, pgm_bytes(images[0]), pgm_bytes(images[1]))
        first = client.get(f"/sessions/{sid}/preview", params={"format": "pgm"})
        second = client.get(f"/sessions/{sid}/preview", params={"format": "pgm"})
        assert first.content == second.content
        assert first.headers["x-revision"] == second.headers["x-revision"]

    def test_preview_reflects_mutations(self, client, images):
        sid = upload(client, pgm_bytes(images[0]), pgm_bytes(images[1]))
        before = client.get(f"/sessions/{sid}/preview", params={"format": "pgm"})
        client.patch(f"/sessions/{sid}/layers/1", json={"coefficient": 0.0})
        after = client.get(f"/sessions/{sid}/preview", params={"format": "pgm"})
        assert after.headers["x-revision"] == "2"
        assert after.content != before.content

    def test_spatial_engine_rejects_subpixel_shift_at_render(self, client, images):
        sid = upload(client, pgm_bytes(images[0]))
        client.patch(f"/sessions/{sid}/layers/0", json={"sx": 0.5})
        client.put(f"/sessions/{sid}/engine", json={"engine": "spatial"})
        response = client.get(f"/sessions/{sid}/preview", params={"format": "pgm"})
        assert response.status_code == 400
        assert response.json()["code"] == "non_integer_shift"
        client.put(f"/sessions/{sid}/engine", json={"engine": "frequency"})
        assert client.get(f"/sessions/{sid}/preview", params={"format": "pgm"}).status_code == 200

    def test_invalid_format_rejected(self, client, images):
        sid = upload(client, pgm_bytes(images[0]))
        response = client.get(f"/sessions/{sid}/preview", params={"format": "bmp"})
        assert response.status_code == 400

    def test_diagnostic_headers_present(self, client, images):
        sid = upload(client, pgm_bytes(images[0]))
        response = client.get(f"/sessions/{sid}/preview", params={"format": "pgm"})
        assert float(response.headers["x-imag-residue"]) < 1e-9
        assert 0.0 <= float(response.headers["x-clamped-fraction"]) <= 1.0


class TestCliConsistency:
    def test_preview_bytes_equal_cli_merge_bytes(self, client, images, tmp_path):
        a, b = images
        (tmp_path / "a.pgm").write_bytes(pgm_bytes(a))
        (tmp_path / "b.pgm").write_bytes(pgm_bytes(b))
        sid = upload(client, pgm_bytes(a), pgm_bytes(b))
        client.patch(f"/sessions/{sid}/layers/0", json={"coefficient": 0.9})
        client.patch(f"/sessions/{sid}/layers/1", json={"coefficient": 0.3, "sx": 3, "sy": -2})
        preview = client.get(f"/sessions/{sid}/preview", params={"format": "pgm"})

        manifest = tmp_path / "equivalent.json"
        manifest.write_text(
            json.dumps(
                {
                    "layers": [
                        {"path": "a.pgm", "coefficient": 0.9},
                        {"path": "b.pgm", "coefficient": 0.3, "shift": [3, -2]},
                    ],
                    "normalize": "maxval",
                    "align": "pad_zero",
                    "engine": "frequency",
                    "output": {"path": "merged.pgm", "policy": "clamp", "maxval": 255},
                }
            )
        )
        assert main(["merge", "--manifest", str(manifest)]) == 0
        assert preview.content == (tmp_path / "merged.pgm").read_bytes()


class TestIsolationAndEviction:
    def test_sessions_are_independent(self, client, images):
        a, b = images
        sid1 = upload(client, pgm_bytes(a))
        sid2 = upload(client, pgm_bytes(b))
        client.patch(f"/sessions/{sid1}/layers/0", json={"coefficient": 0.1})
        assert client.get(f"/sessions/{sid1}").json()["revision"] == 2
        assert client.get(f"/sessions/{sid2}").json()["revision"] == 1

    def test_idle_sessions_are_evicted(self, images):
        with TestClient(create_app(session_ttl=0.05)) as client:
            sid = upload(client, pgm_bytes(images[0]))
            import time

            time.sleep(0.12)
            response = client.get(f"/sessions/{sid}")
            assert response.status_code == 404

    def test_active_sessions_survive(self, images):
        with TestClient(create_app(session_ttl=10.0)) as client:
            sid = upload(client, pgm_bytes(images[0]))
            assert client.get(f"/sessions/{sid}").status_code == 200


class TestThumbsAndStatic:
    def test_layer_thumbnail_is_png(self, client, images):
        sid = upload(client, pgm_bytes(images[0]))
        response = client.get(f"/sessions/{sid}/layers/0/thumb")
        assert response.status_code == 200
        assert response.content[:8] == b"\x89PNG\r\n\x1a\n"

    def test_thumbnail_bad_index(self, client, images):
        sid = upload(client, pgm_bytes(images[0]))
        assert client.get(f"/sessions/{sid}/layers/7/thumb").status_code == 404

    def test_fallback_index_without_bundle(self, client):
        response = client.get("/")
        assert response.status_code == 200
        assert "tuning server" in response.text

    def test_static_bundle_served_when_configured(self, tmp_path, images):
        (tmp_path / "index.html").write_text("<!doctype html><title>tuner</title>ui here")
        with TestClient(create_app(static_root=str(tmp_path))) as client:
            response = client.get("/")
            assert response.status_code == 200
            assert "ui here" in response.text
            # the API keeps precedence over the static mount
            assert client.get("/healthz").json() == {"status": "ok"}
            sid = upload(client, pgm_bytes(images[0]))
            assert client.get(f"/sessions/{sid}").status_code == 200
