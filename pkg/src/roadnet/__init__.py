"""Road network generation: grids, OSM places and images to GMNS / SUMO / SVG."""

__version__ = "0.1.0"
