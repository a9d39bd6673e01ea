"""
gateway provides uniform clients for the remote model capabilities
(named entity recognition, zero-shot classification and LLM completion)
with retries, bounded concurrency and a record/replay fixture backend
"""
