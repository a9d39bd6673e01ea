"""
template_factory provides a jinja2 based template factory so that
prompts and graph documents are rendered the same way everywhere
"""

import os
from typing import Optional

from jinja2 import Environment, FileSystemLoader, TemplateError

from signet.core.logging import logging
from signet.core.utils import format_float, format_utc, sha256

TEMPLATES_PATH = os.path.join(
    os.path.dirname(os.path.realpath(__file__)),
    "..",
    "resources",
    "templates",
)


def dot_quote(value: str) -> str:
    """
    Quotes a value as a DOT identifier

    :param value: Value to quote
    :return: Double quoted identifier with escaped quotes
    """
    escaped = str(value).replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


class TemplateFactory:
    """
    TemplateFactory is a class responsible for loading
    templates and has helper methods
    """

    jinja_env: Environment

    def __init__(self, search_path: Optional[str] = None):
        self.jinja_env = Environment(
            loader=FileSystemLoader(searchpath=search_path or TEMPLATES_PATH),
            trim_blocks=True,
            lstrip_blocks=True,
            keep_trailing_newline=True,
        )
        self.jinja_env.filters["sha256"] = sha256
        self.jinja_env.filters["fixed"] = format_float
        self.jinja_env.filters["dot"] = dot_quote
        self.jinja_env.filters["utc"] = format_utc

    def render(self, template: str, **kwargs) -> str | None:
        """
        Render a template with the specified arguments
        """
        try:
            return self.jinja_env.get_template(template).render(**kwargs)
        except TemplateError as exc:
            logging.error(
                "Failed to render template '%s' with arguments '%s': %s",
                template,
                kwargs,
                exc,
            )
            raise exc
