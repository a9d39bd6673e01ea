"""
network aggregates relation observations into windowed signed network
snapshots, diffs them and exports them
"""
