import pytest

from mtforge.corpus import load_manifest


def write_shard(path, rows):
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for source, target in rows:
            fh.write(f"{source}\t{target}\n")


def build_manifest(root, shards):
    """Write shard files plus a manifest and load it back.

    ``shards`` is a list of (name, "src-tgt", origin, rows).
    """
    lines = []
    for name, direction, origin, rows in shards:
        write_shard(root / name, rows)
        src, tgt = direction.split("-")
        lines.append(f"{name}\t{src}\t{tgt}\t{origin}\t{len(rows)}")
    manifest_path = root / "manifest.tsv"
    manifest_path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    return load_manifest(manifest_path)


@pytest.fixture
def make_corpus(tmp_path):
    def _make(shards):
        return build_manifest(tmp_path, shards)
    return _make
