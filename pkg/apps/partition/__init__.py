"""Indivisibility witnesses, bad colorings and definable self-similarity."""

default_app_config = "apps.partition.apps.PartitionConfig"
