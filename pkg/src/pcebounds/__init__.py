"""Guaranteed upper bounds on the output size of conjunctive queries."""
from .catalog import Database, StatisticsCatalog, load_catalog, load_csv, \
    save_catalog
from .builder import build_catalog, load_database, load_directory
from .config import load_stats_config
from .estimate import METHODS, Estimate, estimate
from .exceptions import PCEError
from .model import ConjunctiveQuery, Relation, load_query, parse_query

from . import bounds
from . import lp
from . import oracle
from . import stats
