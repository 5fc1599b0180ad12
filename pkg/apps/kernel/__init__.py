"""Finite relational structures: signatures, embeddings, canonical forms and ages."""

default_app_config = "apps.kernel.apps.KernelConfig"
