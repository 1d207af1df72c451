"""Explainable retrieval chatbot core.

Subpackages cover the full pipeline: text analysis, corpus storage,
triple extraction, TF-IDF retrieval, the ontology graph, explanation
reports, chat response generation, and the HTTP service around them.
"""

__version__ = "0.1.0"
