"""Dataset manifests: one CSV row per frame with labels and temporal order."""

import csv
import hashlib
from dataclasses import dataclass
from pathlib import Path

TRAIN = "TRAIN"
TEST = "TEST"
INDOOR = "INDOOR"
OUTDOOR = "OUTDOOR"

SPLITS = (TRAIN, TEST)
INDOOR_OUTDOOR = (INDOOR, OUTDOOR)
HANDS_VALUES = ("YES", "NO", "UNKNOWN")

COLUMNS = ["path", "split", "location", "indoor_outdoor", "hands", "sequence_index"]


class ManifestError(ValueError):
    pass


@dataclass(frozen=True)
class ManifestEntry:
    path: str
    split: str
    location: str
    indoor_outdoor: str
    hands: str
    sequence_index: int


@dataclass
class Manifest:
    entries: list

    def __len__(self):
        return len(self.entries)

    def rows(self, split=None):
        """Indices in file (temporal) order, optionally restricted to a split."""
        return [
            i for i, e in enumerate(self.entries) if split is None or e.split == split
        ]

    def column(self, name, split=None):
        return [getattr(self.entries[i], name) for i in self.rows(split)]

    def checksum(self) -> str:
        h = hashlib.sha256()
        for e in self.entries:
            h.update(
                f"{e.path},{e.split},{e.location},{e.indoor_outdoor},{e.hands},{e.sequence_index}\n".encode()
            )
        return h.hexdigest()


def _validate(entries, base_dir, check_paths):
    # temporal order must be recoverable: sequence_index strictly increases
    # inside each (split, location) group, the stand-in for a source video
    last_seen = {}
    for row, e in enumerate(entries, start=2):  # row 1 is the header
        if e.split not in SPLITS:
            raise ManifestError(f"row {row}: split {e.split!r} not in {SPLITS}")
        if e.indoor_outdoor not in INDOOR_OUTDOOR:
            raise ManifestError(
                f"row {row}: indoor_outdoor {e.indoor_outdoor!r} not in {INDOOR_OUTDOOR}"
            )
        if e.hands not in HANDS_VALUES:
            raise ManifestError(f"row {row}: hands {e.hands!r} not in {HANDS_VALUES}")
        key = (e.split, e.location)
        if key in last_seen and e.sequence_index <= last_seen[key]:
            raise ManifestError(
                f"row {row}: sequence_index {e.sequence_index} not increasing within {key}"
            )
        last_seen[key] = e.sequence_index
        if check_paths and not (base_dir / e.path).is_file():
            raise ManifestError(f"row {row}: image path {e.path!r} not found")


def load_manifest(path, check_paths=True) -> Manifest:
    path = Path(path)
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != COLUMNS:
            raise ManifestError(
                f"expected columns {COLUMNS}, got {reader.fieldnames}"
            )
        entries = []
        for row_no, rec in enumerate(reader, start=2):
            try:
                seq = int(rec["sequence_index"])
            except (TypeError, ValueError):
                raise ManifestError(f"row {row_no}: bad sequence_index {rec['sequence_index']!r}")
            entries.append(
                ManifestEntry(
                    path=rec["path"],
                    split=rec["split"],
                    location=rec["location"],
                    indoor_outdoor=rec["indoor_outdoor"],
                    hands=rec["hands"],
                    sequence_index=seq,
                )
            )
    _validate(entries, path.parent, check_paths)
    return Manifest(entries=entries)


def save_manifest(manifest: Manifest, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(COLUMNS)
        for e in manifest.entries:
            writer.writerow(
                [e.path, e.split, e.location, e.indoor_outdoor, e.hands, e.sequence_index]
            )


def resolve_paths(manifest: Manifest, manifest_path) -> list:
    """Absolute image paths, interpreting entries relative to the manifest."""
    base = Path(manifest_path).parent
    return [base / e.path for e in manifest.entries]
