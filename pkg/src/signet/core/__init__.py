"""
core holds the building blocks shared by every signet component:
configuration loading, logging, errors, templates and the worker pool
"""
