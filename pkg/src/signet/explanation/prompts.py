"""
prompts renders the versioned LLM prompts. Changing a template changes
every request digest, so the version is bumped along with it
"""

from typing import List, Optional, Sequence

from signet.core.template_factory import TemplateFactory
from signet.core.types import RelationLabel
from signet.explanation.models import PairExplanation
from signet.gateway.models import ChatMessage
from signet.ingestion.news import NewsItem

RELATION_PROMPT_VERSION = "relation-v1"
SUMMARY_PROMPT_VERSION = "summary-v1"


def build_relation_prompt(
    item: NewsItem,
    class_set: Sequence[RelationLabel],
    include_summary: bool = False,
    factory: Optional[TemplateFactory] = None,
) -> List[ChatMessage]:
    """
    Builds the relation prompt for one item

    :param item: News item
    :param class_set: Classes the model may answer
    :param include_summary: True to add the item summary
    :param factory: Template factory
    :return: System and user messages
    """
    if not class_set:
        raise ValueError("class_set must be non-empty")
    if not item.headline.strip():
        raise ValueError("headline must be non-empty")

    factory = factory or TemplateFactory()
    return [
        ChatMessage(
            role="system",
            content=factory.render(
                "prompts/relation_system.j2",
                version=RELATION_PROMPT_VERSION,
            ),
        ),
        ChatMessage(
            role="user",
            content=factory.render(
                "prompts/relation_user.j2",
                headline=item.headline,
                summary=item.summary if include_summary else None,
                classes=[str(label) for label in class_set],
            ),
        ),
    ]


def build_summary_prompt(
    names: Sequence[str],
    explanations: Sequence[PairExplanation],
    factory: Optional[TemplateFactory] = None,
) -> List[ChatMessage]:
    """
    Builds the summary prompt of a pair

    :param names: Display names of the pair
    :param explanations: Explanations in chronological order
    :param factory: Template factory
    :return: System and user messages
    """
    factory = factory or TemplateFactory()
    return [
        ChatMessage(
            role="system",
            content=factory.render(
                "prompts/summary_system.j2",
                version=SUMMARY_PROMPT_VERSION,
            ),
        ),
        ChatMessage(
            role="user",
            content=factory.render(
                "prompts/summary_user.j2",
                names=list(names),
                explanations=list(explanations),
            ),
        ),
    ]
