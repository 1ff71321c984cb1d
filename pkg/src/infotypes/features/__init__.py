from .assemble import FeatureSet, StandardScaler, assemble_features
from .conversational import (
    BINARY_COLUMNS,
    COLUMNS,
    ConversationalFeatures,
    extract_conversational,
    thread_features,
)
from .tfidf import TfidfVectorizer, fit_vectorizer, ngrams, transform_textual

__all__ = [
    "BINARY_COLUMNS",
    "COLUMNS",
    "ConversationalFeatures",
    "FeatureSet",
    "StandardScaler",
    "TfidfVectorizer",
    "assemble_features",
    "extract_conversational",
    "fit_vectorizer",
    "ngrams",
    "thread_features",
    "transform_textual",
]
