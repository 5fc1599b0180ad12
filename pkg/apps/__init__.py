"""Django apps of the relational-structure workbench, one per module."""
