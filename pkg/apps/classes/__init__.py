"""Isomorphism-closed classes: builtins, forbidden-pattern classes and product classes."""

default_app_config = "apps.classes.apps.ClassesConfig"
