"""
metrics exposes pipeline and backend counters in the prometheus
textfile format
"""
