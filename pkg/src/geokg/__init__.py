"""geokg: a desk-scale geospatial knowledge-graph engine.

Datasets are materialized onto a hierarchical discrete global grid,
linked to regions and hazards through precomputed DE-9IM/RCC-8 relations,
stored as triples under an observation kernel, and served as interactive
area briefings.
"""

__version__ = "0.1.0"

from . import dgg, geometry, ingest, kgmodel, query, store, validate

__all__ = ["dgg", "geometry", "ingest", "kgmodel", "query", "store",
           "validate", "__version__"]
