"""Quantifier-free interpretations, configuration witnesses and their transfers."""

default_app_config = "apps.configurations.apps.ConfigurationsConfig"
