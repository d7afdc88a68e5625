"""
Persistence documents for code families and reports
"""

import json
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import pandas as pd
from pydantic import BaseModel, Field

from .exceptions import DimensionMismatchError
from .greedy_builder import BuildStatus, CodeFamily, Constraint, distance_milestones
from .hex_codec import HexSection
from .ring_codes import GeneratorMatrix, RingId

SCHEMA_VERSION = 1


class CodeFamilyDocument(BaseModel):
    """JSON form of a CodeFamily: enough to rebuild the generator and audit it"""

    schema_version: int = SCHEMA_VERSION
    ring: int
    k1: int
    k2: int
    constraint: Constraint = Constraint.NONE
    seed: int
    run_index: int = 0
    enforce_distinct_columns: bool = False
    status: BuildStatus = BuildStatus.TARGET_REACHED
    n_sym: int
    n_bits: int
    fixed_rows: int = 0
    hex_rows: List[str] = Field(default_factory=list)
    milestones: List[Tuple[int, int]] = Field(default_factory=list)

    @classmethod
    def from_family(cls, family: CodeFamily) -> "CodeFamilyDocument":
        G = family.generator
        section = HexSection.from_generator("family", G, family.fixed_rows)
        return cls(
            ring=G.ring.modulus,
            k1=G.k1,
            k2=G.k2,
            constraint=family.constraint,
            seed=family.seed,
            run_index=family.run_index,
            enforce_distinct_columns=family.enforce_distinct_columns,
            status=family.status,
            n_sym=G.n_sym,
            n_bits=G.n_bits,
            fixed_rows=family.fixed_rows,
            hex_rows=[
                " ".join([label] + groups)
                for label, groups in zip(section.labels, section.groups)
            ],
            milestones=[tuple(m) for m in family.milestones],
        )

    def generator(self) -> GeneratorMatrix:
        section = HexSection(name="family", ring=RingId(self.ring), n_bits=self.n_bits)
        for line in self.hex_rows:
            label, *groups = line.split()
            section.labels.append(label)
            section.groups.append(groups)
        G = section.generator()
        if G.k1 != self.k1 or G.k2 != self.k2:
            raise DimensionMismatchError(
                f"stored rows give ({G.k1}, {G.k2}), header says ({self.k1}, {self.k2})"
            )
        return G

    def to_family(self) -> CodeFamily:
        return CodeFamily(
            generator=self.generator(),
            milestones=tuple(tuple(m) for m in self.milestones),
            constraint=self.constraint,
            seed=self.seed,
            status=self.status,
            enforce_distinct_columns=self.enforce_distinct_columns,
            run_index=self.run_index,
        )

    def milestones_match(self) -> bool:
        """Recompute the milestones from the stored rows"""
        recomputed = distance_milestones(self.generator(), fixed_rows=self.fixed_rows)
        return [tuple(m) for m in self.milestones] == list(recomputed)

    def save(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.model_dump_json(indent=2) + "\n")
        return path

    @classmethod
    def load(cls, path: Union[str, Path]) -> "CodeFamilyDocument":
        return cls.model_validate_json(Path(path).read_text())


class ReportKind(str, Enum):
    TABLE1 = "table1"
    TABLE2 = "table2"
    TABLE3 = "table3"
    BOUND_CURVE = "bound_curve"
    FER_CURVE = "fer_curve"
    DISTANCE_GROWTH = "distance_growth"
    VERIFY = "verify"


class ReportDocument(BaseModel):
    """Tabular report with the configuration it was produced from"""

    kind: ReportKind
    columns: List[str]
    rows: List[Dict[str, Any]] = Field(default_factory=list)
    provenance: Dict[str, Any] = Field(default_factory=dict)
    passed: Optional[bool] = None

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows, columns=self.columns)

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), indent=2, sort_keys=True) + "\n"
