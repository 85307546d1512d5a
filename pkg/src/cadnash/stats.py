"""Run accounting: oracle-instance counts, resolution flags, refutation depths.

Reports must be byte-stable across runs, so everything here is plain ints,
strings and sorted structures.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class RunStats:
    instances_created: int = 0
    instances_collapsed: int = 0
    unresolved_defaults: int = 0
    candidates_total: int = 0
    eliminated: int = 0
    survivors: int = 0
    pruned_prefixes: int = 0
    refutation_depths: dict = field(default_factory=dict)
    flags: list = field(default_factory=list)
    _collapsed_ids: set = field(default_factory=set)

    def count_instance(self, instance) -> None:
        self.instances_created += 1

    def observe_collapse(self, instance) -> None:
        key = id(instance)
        if key not in self._collapsed_ids:
            self._collapsed_ids.add(key)
            self.instances_collapsed += 1

    def flag(self, message: str) -> None:
        if message not in self.flags:
            self.flags.append(message)

    def to_dict(self) -> dict:
        return {
            "aouc_instances_created": self.instances_created,
            "aouc_instances_collapsed": self.instances_collapsed,
            "unresolved_defaults": self.unresolved_defaults,
            "candidates_total": self.candidates_total,
            "eliminated": self.eliminated,
            "survivors": self.survivors,
            "pruned_prefixes": self.pruned_prefixes,
            "refutation_depths": {str(k): v for k, v in
                                  sorted(self.refutation_depths.items())},
            "flags": list(self.flags),
        }
