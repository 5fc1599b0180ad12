"""Joint embedding, (strong) amalgamation and disjoint n-amalgamation: checkers and builders."""

default_app_config = "apps.amalgamation.apps.AmalgamationConfig"
