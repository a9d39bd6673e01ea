"""
ingestion loads, validates, deduplicates and pre-filters news corpora
"""
