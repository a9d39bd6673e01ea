"""
cli provides the signet command line
"""
