"""Synthetic corpora with known institute ground truth.

Each institute gets a handful of systematic surface variants of its name
(abbreviation, comma reordering, department prefix carrying a leading
number).  Authors belong to one institute and cycle through its aliases
round-robin across their appearances, so an author with at least as many
appearances as the institute has aliases links every alias pair.  Noise
sources are homonyms (a name reused at another institute) and appearances
that carry another institute's alias.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import IO, Iterable, Sequence

from .ingest import AuthorEntry, PaperRecord

Range = tuple[int, int]

_PREFIXES = [
    "All India", "National", "Indian", "Central", "State", "Regional", "Government",
    "Royal", "Eastern", "Western", "Northern", "Southern", "Sri Venkateswara",
    "Birla", "Amrita", "Manipal", "Jawaharlal", "Rajiv Gandhi", "Homi Bhabha", "Tata",
]
_KINDS = ["Institute", "University", "College", "Academy", "School", "Centre"]
_FIELDS = [
    "Medical Sciences", "Technology", "Science", "Engineering", "Management",
    "Pharmaceutical Education", "Agricultural Research", "Information Technology",
    "Chemical Technology", "Marine Biology", "Forestry", "Law", "Ayurveda",
    "Dental Sciences", "Mathematical Sciences", "Fundamental Research",
]
_CITY_HEADS = [
    "Ra", "Ja", "Ka", "Ma", "Na", "Pa", "Sa", "Ta", "Va", "Ha", "Bha", "Cha",
    "Dha", "Gha", "Kha", "Pu", "Su", "Lu", "Mu", "Ko", "Jo", "Ri", "Al", "Am",
]
_CITY_MIDS = ["n", "r", "l", "m", "dh", "t", "k", "s", "v", "nd", "sh", "j", "b", "g", "th"]
_CITY_TAILS = [
    "pur", "abad", "nagar", "gar", "ganj", "pet", "wada", "kot", "garh",
    "puram", "halli", "ur", "esh", "ikesh", "pat",
]
_DEPARTMENTS = [
    "Physics", "Chemistry", "Biochemistry", "Anatomy", "Physiology", "Pathology",
    "Microbiology", "Pharmacology", "Medicine", "Surgery", "Pediatrics", "Radiology",
    "Computer Science", "Mathematics", "Statistics", "Civil Engineering",
    "Mechanical Engineering", "Electrical Engineering", "Botany", "Zoology",
]
_GIVEN = [
    "Aarav", "Aditi", "Akash", "Amit", "Ananya", "Anil", "Anjali", "Arjun", "Asha",
    "Deepak", "Divya", "Gaurav", "Geeta", "Harish", "Isha", "Jaya", "Karan", "Kavita",
    "Kiran", "Lakshmi", "Manish", "Meera", "Mohan", "Neha", "Nikhil", "Nisha", "Pooja",
    "Prakash", "Priya", "Rahul", "Rajesh", "Ravi", "Rekha", "Rohit", "Sanjay", "Sarita",
    "Shreya", "Sunil", "Sunita", "Suresh", "Tara", "Uma", "Varun", "Vijay", "Vikram",
    "Vinita", "Yash", "Zoya", "Farhan", "Imran", "Ayesha", "Gurpreet", "Harpreet",
    "Joseph", "Mary", "Thomas", "Anita", "Bina", "Chetan", "Dinesh",
]
_SURNAMES = [
    "Sharma", "Verma", "Gupta", "Singh", "Kumar", "Patel", "Shah", "Mehta", "Iyer",
    "Nair", "Menon", "Reddy", "Rao", "Naidu", "Das", "Bose", "Ghosh", "Mukherjee",
    "Banerjee", "Chatterjee", "Sen", "Roy", "Mishra", "Pandey", "Tiwari", "Dubey",
    "Yadav", "Jain", "Agarwal", "Bansal", "Goel", "Kapoor", "Khanna", "Malhotra",
    "Chopra", "Arora", "Sethi", "Bhatia", "Saxena", "Srivastava", "Tripathi", "Joshi",
    "Kulkarni", "Deshpande", "Patil", "Pawar", "Chavan", "Gowda", "Hegde", "Shetty",
    "Pillai", "Kurian", "Thomas", "George", "Varghese", "Khan", "Ahmed", "Ali",
    "Hussain", "Qureshi", "Siddiqui", "Ansari", "Gill", "Sandhu", "Dhillon", "Grewal",
    "Sidhu", "Bajwa", "Rathore", "Chauhan", "Thakur", "Rajput", "Negi", "Rawat",
    "Bisht", "Dutta", "Sarkar", "Paul", "Mondal", "Biswas", "Haldar", "Saha",
    "Kar", "Panda", "Mohanty", "Behera", "Sahoo", "Nayak", "Pradhan", "Barua",
    "Bora", "Gogoi", "Kalita", "Lal", "Prasad", "Sinha", "Choudhary", "Mahato",
    "Murmu", "Soren", "Tudu", "Hembram", "Iqbal", "Mirza", "Baig", "Rizvi",
    "Naqvi", "Zaidi", "Abraham", "Mathew", "John", "Jacob", "Philip", "Cherian",
    "Raman", "Krishnan", "Subramanian", "Venkatesh", "Srinivasan", "Raghavan",
]
_INITIALS = "ABCDEFGHIJKLMNOPRSTVY"


@dataclass(frozen=True)
class SynthConfig:
    """Generator parameters; ranges are inclusive ``(low, high)`` pairs.

    ``family_pool`` caps the number of distinct institute name families; with
    ``family_pool < institute_count`` several institutes are branches of one
    family in different cities.  ``institute_sizes`` optionally fixes the
    author count of each institute, overriding ``authors_per_institute``.
    """

    institute_count: int = 10
    aliases_per_institute: Range = (3, 5)
    authors_per_institute: Range = (5, 15)
    papers_per_author: Range = (3, 8)
    coauthors_per_paper: Range = (2, 6)
    homonym_rate: float = 0.0
    cross_institute_noise_rate: float = 0.0
    rng_seed: int = 0
    family_pool: int | None = None
    institute_sizes: tuple[int, ...] | None = None

    def validate(self) -> None:
        if self.institute_count < 1:
            raise ValueError("institute_count must be >= 1")
        for name in ("aliases_per_institute", "authors_per_institute", "papers_per_author", "coauthors_per_paper"):
            lo, hi = getattr(self, name)
            if not 1 <= lo <= hi:
                raise ValueError(f"{name} must be a nonempty positive range, got {(lo, hi)}")
        for name in ("homonym_rate", "cross_institute_noise_rate"):
            rate = getattr(self, name)
            if not 0.0 <= rate <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {rate}")
        if self.institute_count < 2 and self.homonym_rate > 0:
            raise ValueError("homonym_rate > 0 needs at least 2 institutes to borrow names from")
        if self.institute_count < 2 and self.cross_institute_noise_rate > 0:
            raise ValueError("cross_institute_noise_rate > 0 needs at least 2 institutes")
        if self.family_pool is not None and self.family_pool < 1:
            raise ValueError("family_pool must be >= 1")
        if self.institute_sizes is not None:
            if len(self.institute_sizes) != self.institute_count:
                raise ValueError("institute_sizes must have one entry per institute")
            if min(self.institute_sizes) < 1:
                raise ValueError("institute_sizes entries must be >= 1")


@dataclass
class SyntheticTruth:
    """Ground truth: affiliation string -> institute id, author name -> institute ids."""

    affiliations: dict[str, int] = field(default_factory=dict)
    authors: dict[str, tuple[int, ...]] = field(default_factory=dict)

    def institute_aliases(self) -> dict[int, list[str]]:
        out: dict[int, list[str]] = {}
        for s, inst in self.affiliations.items():
            out.setdefault(inst, []).append(s)
        for v in out.values():
            v.sort()
        return out


@dataclass
class _Person:
    name: str
    institute: int
    offset: int
    appearances: int = 0


def _abbreviate(full: str) -> str:
    return "".join(w[0] for w in full.split() if w != "of").upper()


def _city_names(rng: random.Random) -> list[str]:
    out = [h + m + t for h in _CITY_HEADS for m in _CITY_MIDS for t in _CITY_TAILS]
    rng.shuffle(out)
    return out


def _families(rng: random.Random) -> list[str]:
    out = [f"{p} {kind} of {f}" for p in _PREFIXES for kind in _KINDS for f in _FIELDS]
    rng.shuffle(out)
    return out


def _alias_candidates(full: str, city: str):
    abbr = _abbreviate(full)
    yield f"{full}, {city}"
    yield f"{abbr}, {city}"
    yield f"Department of {_DEPARTMENTS[0]}, {full}, {city}"
    yield f"{city}, {full}"
    yield f"{abbr} {city}"
    yield f"{full} {city}"
    for dept in _DEPARTMENTS[1:]:
        yield f"Department of {dept}, {abbr}, {city}"
        yield f"Department of {dept}, {full}, {city}"


def _institute_names(rng: random.Random, config: SynthConfig) -> list[tuple[str, str]]:
    """Distinct (family, city) pairs; institutes sharing a family get distinct cities."""
    n = config.institute_count
    families = _families(rng)
    cities = _city_names(rng)
    n_fam = min(config.family_pool or n, n, len(families))
    if -(-n // n_fam) > len(cities):
        raise ValueError(f"cannot name {n} institutes from {n_fam} families")
    out = []
    for k in range(n):
        f, j = k % n_fam, k // n_fam
        out.append((families[f], cities[(f * 131 + j) % len(cities)]))
    return out


def _person_names(rng: random.Random, k: int) -> list[str]:
    n_init = len(_INITIALS) + 1  # second initial may be absent
    space = len(_GIVEN) * len(_INITIALS) * n_init * len(_SURNAMES)
    if k > space:
        raise ValueError(f"cannot generate {k} distinct author names")
    out = []
    for idx in rng.sample(range(space), k):
        g, idx = divmod(idx, len(_INITIALS) * n_init * len(_SURNAMES))
        i1, idx = divmod(idx, n_init * len(_SURNAMES))
        i2, s = divmod(idx, len(_SURNAMES))
        middle = f"{_INITIALS[i1]}." if i2 == len(_INITIALS) else f"{_INITIALS[i1]}. {_INITIALS[i2]}."
        out.append(f"{_GIVEN[g]} {middle} {_SURNAMES[s]}")
    return out


def _pack(rng: random.Random, slots: list[_Person], sizes: Range) -> list[list[_Person]]:
    """Group shuffled author slots into papers without repeating an author on a paper."""
    papers = []
    remaining = slots
    while remaining:
        target = rng.randint(*sizes)
        paper: list[_Person] = []
        seen: set[int] = set()
        rest: list[_Person] = []
        for k, p in enumerate(remaining):
            if len(paper) == target:
                rest.extend(remaining[k:])
                break
            if id(p) in seen:
                rest.append(p)
            else:
                paper.append(p)
                seen.add(id(p))
        papers.append(paper)
        remaining = rest
    return papers


def generate(config: SynthConfig) -> tuple[list[PaperRecord], SyntheticTruth]:
    """Generate a corpus and its ground truth; deterministic for a fixed seed.

    Truth contains exactly the cleaned affiliation strings that occur in the
    corpus.  Department-style aliases are emitted with a random leading
    number which ingest cleaning removes.
    """
    config.validate()
    rng = random.Random(config.rng_seed)

    aliases: list[list[str]] = []
    used_aliases: set[str] = set()
    for full, city in _institute_names(rng, config):
        want = rng.randint(*config.aliases_per_institute)
        inst_aliases = []
        for cand in _alias_candidates(full, city):
            if len(inst_aliases) == want:
                break
            if cand not in used_aliases:
                inst_aliases.append(cand)
                used_aliases.add(cand)
        aliases.append(inst_aliases)

    if config.institute_sizes is not None:
        sizes = list(config.institute_sizes)
    else:
        sizes = [rng.randint(*config.authors_per_institute) for _ in range(config.institute_count)]
    names = iter(_person_names(rng, sum(sizes)))

    people: list[list[_Person]] = []
    for inst, size in enumerate(sizes):
        members = []
        for _ in range(size):
            if inst and config.homonym_rate and rng.random() < config.homonym_rate:
                name = rng.choice(people[rng.randrange(inst)]).name
            else:
                name = next(names)
            members.append(_Person(name, inst, rng.randrange(len(aliases[inst]))))
        people.append(members)

    truth = SyntheticTruth()
    author_insts: dict[str, set[int]] = {}
    papers: list[list[tuple[str, str]]] = []
    for inst, members in enumerate(people):
        slots = [p for p in members for _ in range(rng.randint(*config.papers_per_author))]
        rng.shuffle(slots)
        for group in _pack(rng, slots, config.coauthors_per_paper):
            entry = []
            for p in group:
                alias_inst = inst
                if config.cross_institute_noise_rate and rng.random() < config.cross_institute_noise_rate:
                    alias_inst = rng.randrange(config.institute_count - 1)
                    alias_inst += alias_inst >= inst
                    alias = rng.choice(aliases[alias_inst])
                else:
                    alias = aliases[inst][(p.offset + p.appearances) % len(aliases[inst])]
                p.appearances += 1
                truth.affiliations[alias] = alias_inst
                author_insts.setdefault(p.name, set()).add(inst)
                entry.append((p.name, _decorate(rng, alias)))
            papers.append(entry)

    rng.shuffle(papers)
    records = [
        PaperRecord(
            doi=f"10.5555/synth.{config.rng_seed}.{k:06d}",
            authors=tuple(AuthorEntry(name, (aff,)) for name, aff in entry),
        )
        for k, entry in enumerate(papers)
    ]
    truth.authors = {name: tuple(sorted(v)) for name, v in author_insts.items()}
    return records, truth


def _decorate(rng: random.Random, alias: str) -> str:
    # leading numbering marker, as found in scraped metadata
    if alias.startswith("Department of "):
        return f"{rng.randint(1, 9)} {alias}"
    return alias


def plant_confusion(
    records: Sequence[PaperRecord],
    truth: SyntheticTruth,
    shared_author_count: int,
    institutes: tuple[int, int] | None = None,
    papers_each: int = 3,
) -> tuple[list[PaperRecord], SyntheticTruth]:
    """Add authors who publish under one alias of each of two institutes.

    Each of the ``shared_author_count`` new authors writes ``papers_each``
    papers with the first (lexicographically smallest) alias of each
    institute, so that alias pair gets co-occurrence weight exactly
    ``shared_author_count``: merged at thresholds up to that weight and split
    above it.
    """
    if shared_author_count < 0:
        raise ValueError("shared_author_count must be >= 0")
    by_inst = truth.institute_aliases()
    if len(by_inst) < 2:
        raise ValueError("plant_confusion needs at least 2 institutes")
    if shared_author_count == 0:
        return list(records), truth
    a, b = institutes if institutes is not None else sorted(by_inst)[:2]
    if a == b or a not in by_inst or b not in by_inst:
        raise ValueError(f"institutes {a!r} and {b!r} must be two distinct known institutes")
    alias_a, alias_b = by_inst[a][0], by_inst[b][0]

    out = list(records)
    new_truth = SyntheticTruth(dict(truth.affiliations), dict(truth.authors))
    taken = set(truth.authors)
    for rec in records:
        taken.update(x.name for x in rec.authors)
    k = 0
    serial = len(out)
    for _ in range(shared_author_count):
        while f"Planted Author {k}" in taken:
            k += 1
        name = f"Planted Author {k}"
        taken.add(name)
        for _ in range(papers_each):
            for alias in (alias_a, alias_b):
                out.append(PaperRecord(f"10.5555/planted.{serial:06d}", (AuthorEntry(name, (alias,)),)))
                serial += 1
        new_truth.authors[name] = tuple(sorted((a, b)))
    return out, new_truth


def guaranteed_threshold(config: SynthConfig) -> int | None:
    """Largest threshold at which zero-noise recovery is exact, if guaranteed.

    When every author appears at least as often as their institute has
    aliases, round-robin assignment makes every author use every alias, so
    each alias pair shares all of the institute's authors.
    """
    if config.homonym_rate or config.cross_institute_noise_rate:
        return None
    if config.papers_per_author[0] < config.aliases_per_institute[1]:
        return None
    if config.institute_sizes is not None:
        return min(config.institute_sizes)
    return config.authors_per_institute[0]


def branch_config(seed: int = 0) -> SynthConfig:
    """Two branches of one institute family, distinct cities, disjoint authors."""
    return SynthConfig(
        institute_count=2,
        aliases_per_institute=(4, 4),
        authors_per_institute=(8, 8),
        papers_per_author=(4, 6),
        coauthors_per_paper=(2, 4),
        rng_seed=seed,
        family_pool=1,
    )


def confusion_corpus(seed: int = 0, shared_author_count: int = 3) -> tuple[list[PaperRecord], SyntheticTruth]:
    """A main institute plus two small branches, each branch linked to it.

    The main institute has 10 authors and each branch 3, every author using
    every alias; ``shared_author_count`` planted authors tie each branch to
    the main institute.  With the default of 3, threshold 3 merges all three
    institutes and threshold 4 leaves only the main institute clustered.
    """
    config = SynthConfig(
        institute_count=3,
        aliases_per_institute=(4, 4),
        papers_per_author=(4, 6),
        coauthors_per_paper=(2, 4),
        rng_seed=seed,
        family_pool=1,
        institute_sizes=(10, 3, 3),
    )
    records, truth = generate(config)
    records, truth = plant_confusion(records, truth, shared_author_count, institutes=(0, 1))
    return plant_confusion(records, truth, shared_author_count, institutes=(0, 2))


def large_scale_config(seed: int = 0) -> SynthConfig:
    """About 51k papers, 150k distinct author names and 75k affiliation strings (seed 0)."""
    return SynthConfig(
        institute_count=19371,
        aliases_per_institute=(4, 4),
        authors_per_institute=(6, 10),
        papers_per_author=(1, 2),
        coauthors_per_paper=(4, 8),
        homonym_rate=0.03,
        cross_institute_noise_rate=0.01,
        rng_seed=seed,
    )


def write_truth(fh: IO[str], truth: SyntheticTruth) -> None:
    for s in sorted(truth.affiliations):
        fh.write(json.dumps({"affiliation": s, "institute_id": truth.affiliations[s]}, ensure_ascii=False))
        fh.write("\n")


def read_truth(lines: Iterable[str]) -> SyntheticTruth:
    truth = SyntheticTruth()
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            continue
        obj = json.loads(line)
        try:
            key, inst = obj["affiliation"], obj["institute_id"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"line {lineno}: not a truth record") from exc
        if not isinstance(key, str) or not isinstance(inst, int):
            raise ValueError(f"line {lineno}: bad field types")
        if key in truth.affiliations and truth.affiliations[key] != inst:
            raise ValueError(f"line {lineno}: {key!r} assigned to two institutes")
        truth.affiliations[key] = inst
    return truth
