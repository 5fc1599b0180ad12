"""Lexicographic, full and superposition products of structures and classes."""

default_app_config = "apps.products.apps.ProductsConfig"
