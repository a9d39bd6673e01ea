"""
balance provides structural balance analytics over signed snapshots
"""
