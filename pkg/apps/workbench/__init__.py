"""Command-line surface: structure DSL, repro catalog, DOT export and the run cache."""

default_app_config = "apps.workbench.apps.WorkbenchConfig"
