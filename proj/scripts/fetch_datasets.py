#!/usr/bin/env python3
"""Fetch and convert the benchmark datasets into data/.

Needs network access and scipy (for the .mat archives). Outputs:

  data/facebook_combined.txt   edge list, 4039 nodes / 88234 edges
  data/astroph_edges.txt       edge list, 17903 nodes / 197031 edges (extended)
  data/ppi_edges.txt           edge list, 3890 nodes / 76584 edges
  data/ppi_labels.txt          node label lists, 50 labels
  data/blogcatalog_edges.txt   edge list, 10312 nodes / 333983 edges (extended)
  data/blogcatalog_labels.txt  node label lists, 39 labels

Integrity is validated by node/edge/label counts rather than checksums, since
the upstream hosts occasionally re-compress the archives.

The DBLP co-author benchmark (51264 nodes / 127968 edges / 60 labels) has no
stable public mirror; place dblp_edges.txt / dblp_labels.txt in data/ by hand
if you have a copy.
"""

import gzip
import io
import sys
import urllib.request
from pathlib import Path

DATA_DIR = Path(__file__).resolve().parent.parent / "data"

SNAP = "https://snap.stanford.edu"
SOURCES = {
    "facebook_combined.txt.gz": f"{SNAP}/data/facebook_combined.txt.gz",
    "ca-AstroPh.txt.gz": f"{SNAP}/data/ca-AstroPh.txt.gz",
    "Homo_sapiens.mat": f"{SNAP}/node2vec/Homo_sapiens.mat",
    "blogcatalog.mat": "http://leitang.net/code/social-dimension/data/blogcatalog.mat",
}

EXPECTED = {
    "facebook_combined.txt": (4039, 88234),
    "astroph_edges.txt": (17903, 197031),
    "ppi_edges.txt": (3890, 76584),
    "blogcatalog_edges.txt": (10312, 333983),
}


def download(url: str) -> bytes:
    print(f"fetching {url}")
    with urllib.request.urlopen(url, timeout=120) as response:
        return response.read()


def write_edge_list(path: Path, edges) -> tuple[int, int]:
    nodes = set()
    unique = set()
    for a, b in edges:
        if a == b:
            continue
        unique.add((min(a, b), max(a, b)))
        nodes.add(a)
        nodes.add(b)
    with path.open("w") as out:
        for a, b in sorted(unique):
            out.write(f"{a} {b}\n")
    return len(nodes), len(unique)


def convert_snap_gz(blob: bytes, path: Path) -> tuple[int, int]:
    edges = []
    with gzip.open(io.BytesIO(blob), "rt") as text:
        for line in text:
            if line.startswith("#") or not line.strip():
                continue
            a, b = line.split()
            edges.append((int(a), int(b)))
    return write_edge_list(path, edges)


def convert_mat(blob: bytes, edges_path: Path, labels_path: Path) -> tuple[int, int, int]:
    from scipy.io import loadmat
    from scipy.sparse import coo_matrix

    mat = loadmat(io.BytesIO(blob))
    network = coo_matrix(mat["network"])
    groups = coo_matrix(mat["group"])

    pairs = ((int(r), int(c)) for r, c in zip(network.row, network.col) if r < c)
    n_nodes, n_edges = write_edge_list(edges_path, pairs)

    labels = {}
    for node, label in zip(groups.row, groups.col):
        labels.setdefault(int(node), set()).add(int(label))
    with labels_path.open("w") as out:
        for node in sorted(labels):
            ids = " ".join(str(x) for x in sorted(labels[node]))
            out.write(f"{node} {ids}\n")
    return n_nodes, n_edges, int(groups.shape[1])


def check(name: str, produced: tuple[int, int]) -> None:
    expected = EXPECTED[name]
    status = "ok" if produced == expected else "MISMATCH"
    print(f"  {name}: {produced[0]} nodes / {produced[1]} edges "
          f"(expected {expected[0]}/{expected[1]}) {status}")
    if produced != expected:
        sys.exit(f"{name} does not match the published statistics")


def main() -> None:
    DATA_DIR.mkdir(exist_ok=True)

    blob = download(SOURCES["facebook_combined.txt.gz"])
    check("facebook_combined.txt",
          convert_snap_gz(blob, DATA_DIR / "facebook_combined.txt"))

    blob = download(SOURCES["Homo_sapiens.mat"])
    nodes, edges, labels = convert_mat(blob, DATA_DIR / "ppi_edges.txt",
                                       DATA_DIR / "ppi_labels.txt")
    check("ppi_edges.txt", (nodes, edges))
    print(f"  ppi_labels.txt: {labels} labels (expected 50)")

    try:
        blob = download(SOURCES["ca-AstroPh.txt.gz"])
        check("astroph_edges.txt", convert_snap_gz(blob, DATA_DIR / "astroph_edges.txt"))
    except Exception as error:  # extended dataset, not gating
        print(f"  ca-AstroPh skipped: {error}")

    try:
        blob = download(SOURCES["blogcatalog.mat"])
        nodes, edges, labels = convert_mat(blob, DATA_DIR / "blogcatalog_edges.txt",
                                           DATA_DIR / "blogcatalog_labels.txt")
        check("blogcatalog_edges.txt", (nodes, edges))
        print(f"  blogcatalog_labels.txt: {labels} labels (expected 39)")
    except Exception as error:
        print(f"  BlogCatalog skipped: {error}")

    print("done")


if __name__ == "__main__":
    main()
