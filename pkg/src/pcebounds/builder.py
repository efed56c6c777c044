"""Building the statistics catalog of a database."""
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from pathlib import Path

from .catalog import Database, StatisticsCatalog, file_digest, load_csv
from .config import DEFAULT_MAX_RUNS
from .stats.compress import cdf_upper_compress
from .stats.conditional import build_conditional_stats
from .stats.degree import degree_sequence, lp_norm
from .stats.entries import SequenceEntry, StatEntry

logger = logging.getLogger(__name__)


def load_database(data_dir, config):
    """Load every relation a statistics configuration names.

    :param data_dir: Directory the configured file names are relative
        to.
    :type data_dir: str or :class:`pathlib.Path`

    :param config: The statistics configuration.
    :type config: :class:`~pcebounds.config.StatsConfig`

    :rtype: :class:`~pcebounds.catalog.Database`
    """
    data_dir = Path(data_dir)

    return Database.from_relations(
        load_csv(data_dir / rel_config.file, rel_config.name,
                 rel_config.header)
        for rel_config in config.relations)


def load_directory(data_dir):
    """Load every ``*.csv`` file of a directory as a relation named
    after the file.

    :rtype: :class:`~pcebounds.catalog.Database`
    """
    return Database.from_relations(
        load_csv(path, path.stem)
        for path in sorted(Path(data_dir).glob("*.csv")))


def _global_entries(relation, cond, target, norms):
    sequence = degree_sequence(relation, cond, target)

    return [StatEntry(relation.name, cond, target, p, lp_norm(sequence, p))
            for p in norms]


def _stored_sequence(relation, cond, target, max_runs):
    sequence = degree_sequence(relation, cond, target)

    return SequenceEntry(relation.name, cond, target,
                         cdf_upper_compress(sequence, max_runs))


def build_relation_stats(relation, rel_config, config):
    """All statistics one relation's configuration asks for.

    Entries with equal keys are computed once.

    :return: The norm statistics and the stored sequences.
    :rtype: tuple[list[:class:`~pcebounds.stats.entries.StatEntry`],
        list[:class:`~pcebounds.stats.entries.SequenceEntry`]]
    """
    entries = {}
    sequences = {}
    everything = relation.attributes

    def add_entries(new_entries):
        for entry in new_entries:
            entries.setdefault(entry.key, entry)

    def add_sequence(sequence_entry):
        sequences.setdefault(sequence_entry.key, sequence_entry)

    if config.cardinality:
        add_entries([StatEntry(relation.name, (), everything, 1,
                               len(relation))])

    if config.full_sequences:
        for attr in everything:
            add_entries(_global_entries(relation, (attr,), everything,
                                        config.norms))
            add_sequence(_stored_sequence(relation, (attr,), everything,
                                          config.max_runs))

    for spec in rel_config.statistics:
        add_entries(_global_entries(relation, spec.cond, spec.target,
                                    spec.norms))

        if spec.cond_attr is not None:
            add_entries(build_conditional_stats(relation, spec.cond_attr,
                                                spec.cond, spec.target,
                                                spec.norms, spec.mcv_count,
                                                spec.buckets))

        if spec.sequence:
            max_runs = spec.max_runs or config.max_runs or DEFAULT_MAX_RUNS
            add_sequence(_stored_sequence(relation, spec.cond, spec.target,
                                          max_runs))

    return list(entries.values()), list(sequences.values())


def build_catalog(database, config, data_dir=None, workers=None):
    """Compute the statistics of every configured relation.

    Relations are processed in parallel; the catalog is assembled in
    configuration order.

    :param database: The loaded relations.
    :type database: :class:`~pcebounds.catalog.Database`

    :param config: The statistics configuration.
    :type config: :class:`~pcebounds.config.StatsConfig`

    :param data_dir: If given, digests of the data files are recorded
        for staleness checks.
    :type data_dir: str or :class:`pathlib.Path`, optional

    :param workers: Number of worker threads.
    :type workers: int, optional

    :rtype: :class:`~pcebounds.catalog.StatisticsCatalog`
    """
    def build(rel_config):
        start = time.perf_counter()
        result = build_relation_stats(database[rel_config.name], rel_config,
                                      config)
        elapsed = time.perf_counter() - start

        logger.info("Built %d statistics and %d sequences for %s in %.3fs",
                    len(result[0]), len(result[1]), rel_config.name, elapsed)

        return result, elapsed

    with ThreadPoolExecutor(max_workers=workers) as executor:
        results = list(executor.map(build, config.relations))

    entries = []
    sequences = []
    summary = {}
    for rel_config, ((rel_entries, rel_sequences), elapsed) in zip(
            config.relations, results):
        entries.extend(rel_entries)
        sequences.extend(rel_sequences)
        summary[rel_config.name] = {"entries": len(rel_entries),
                                    "sequences": len(rel_sequences),
                                    "seconds": round(elapsed, 6)}

    meta = {"built_at": datetime.now(timezone.utc).isoformat(
                timespec="seconds"),
            "build": summary}

    if data_dir is not None:
        meta["sources"] = {
            rel_config.name: {"file": rel_config.file,
                              "sha256": file_digest(Path(data_dir)
                                                    / rel_config.file)}
            for rel_config in config.relations}

    return StatisticsCatalog(entries, sequences,
                             {rel_config.name:
                              database[rel_config.name].attributes
                              for rel_config in config.relations},
                             meta)
