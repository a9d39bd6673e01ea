"""
relations classifies entity pair relationships with a zero-shot
classifier
"""
