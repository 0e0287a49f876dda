"""Six-way YouTube comment classification: ingest, preprocess, vectorize, train, evaluate."""

__version__ = "0.1.0"
