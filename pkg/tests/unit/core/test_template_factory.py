import os

import pytest
from jinja2 import TemplateError

from signet.core.template_factory import (
    TEMPLATES_PATH,
    TemplateFactory,
    dot_quote,
)


def test_template_factory_initialization_default_path():
    factory = TemplateFactory()
    assert factory.jinja_env.loader.searchpath == [TEMPLATES_PATH]
    assert os.path.isdir(os.path.join(TEMPLATES_PATH, "prompts"))


def test_template_factory_initialization_custom_path():
    custom_path = "/custom/templates"
    factory = TemplateFactory(search_path=custom_path)
    assert factory.jinja_env.loader.searchpath == [custom_path]


def test_dot_quote():
    assert dot_quote("apple") == '"apple"'
    assert dot_quote('say "hi"') == '"say \\"hi\\""'
    assert dot_quote("a\\b") == '"a\\\\b"'


@pytest.fixture()
def templates_custom_path(tmp_path):
    with open(
        os.path.join(tmp_path, "template.j2"), encoding="utf-8", mode="w+"
    ) as tf:
        tf.write("Hello, {{ name }}!")
    with open(
        os.path.join(tmp_path, "filters.j2"), encoding="utf-8", mode="w+"
    ) as tf:
        tf.write(
            "{% for w in weights %}\n"
            "{{ name | dot }} {{ w | fixed }}\n"
            "{% endfor %}\n"
        )

    return str(tmp_path)


class TestTemplates:
    def test_render_template_success(self, templates_custom_path):
        factory = TemplateFactory(templates_custom_path)
        assert factory.render("template.j2", name="World") == "Hello, World!"
        assert factory.render("template.j2") == "Hello, !"

    def test_render_filters(self, templates_custom_path):
        factory = TemplateFactory(templates_custom_path)

        rendered = factory.render(
            "filters.j2", name="Apple", weights=[-0.5, 0.25]
        )

        assert rendered == '"Apple" -0.500000\n"Apple" 0.250000\n'

    def test_render_template_failure(self, templates_custom_path):
        factory = TemplateFactory(templates_custom_path)
        with pytest.raises(TemplateError):
            factory.render("nonexistent.txt")
