"""Feature persistence: a JSON header line plus comma-separated value rows.

The header records the descriptor, its config, the producing seed and the
checksum of the manifest the rows are aligned to, so downstream stages can
detect drift between features and labels.
"""

import json
from dataclasses import dataclass

import numpy as np

from .features import DescriptorConfig, FeatureMatrix


class StoreError(ValueError):
    pass


@dataclass
class FeatureStore:
    descriptor_id: str
    config: DescriptorConfig
    manifest_checksum: str
    matrix: FeatureMatrix
    seed: int = 42


def save_features(store: FeatureStore, path) -> None:
    header = {
        "kind": "features",
        "version": 1,
        "descriptor_id": store.descriptor_id,
        "dim": store.matrix.cols,
        "count": store.matrix.rows,
        "config": store.config.to_dict(),
        "manifest_checksum": store.manifest_checksum,
        "seed": store.seed,
        "row_order": list(store.matrix.row_order),
    }
    with open(path, "w") as fh:
        fh.write(json.dumps(header) + "\n")
        for row in store.matrix.data:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def load_features(path) -> FeatureStore:
    with open(path) as fh:
        first = fh.readline()
        try:
            header = json.loads(first)
        except json.JSONDecodeError as exc:
            raise StoreError(f"bad feature header: {exc}") from exc
        if header.get("kind") != "features":
            raise StoreError(f"not a feature file (kind={header.get('kind')!r})")
        rows = []
        for line in fh:
            line = line.strip()
            if line:
                rows.append([float(v) for v in line.split(",")])
    data = np.array(rows, dtype=np.float64) if rows else np.zeros((0, header["dim"]))
    if data.shape != (header["count"], header["dim"]):
        raise StoreError(
            f"feature payload shape {data.shape} does not match header "
            f"({header['count']}, {header['dim']})"
        )
    return FeatureStore(
        descriptor_id=header["descriptor_id"],
        config=DescriptorConfig.from_dict(header["config"]),
        manifest_checksum=header["manifest_checksum"],
        matrix=FeatureMatrix(data=data, row_order=list(header["row_order"])),
        seed=header["seed"],
    )


def check_alignment(store: FeatureStore, manifest) -> None:
    """Fail when features were extracted from a different manifest."""
    if store.manifest_checksum != manifest.checksum():
        raise StoreError(
            "feature store checksum does not match the manifest; re-run extraction"
        )
