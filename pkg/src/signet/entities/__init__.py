"""
entities maps organization mentions to canonical entities
"""
