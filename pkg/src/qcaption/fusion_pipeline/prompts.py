"""Prompt templates and their rendering.

Placeholders are written {name} (lowercase letters and underscores).
Rendering a template that names a placeholder without a supplied value is an
error; supplying values the template ignores is fine. All defaults are
overridable via the config file's "prompts" section.
"""

from __future__ import annotations

import re

from ..errors import TemplateError

_PLACEHOLDER = re.compile(r"\{([a-z_]+)\}")

DEFAULT_PROMPTS: dict[str, str] = {
    "frame_caption": "Describe this image in detail.",
    "frame_qa": (
        "Look at this image and answer: {question}. "
        "If the image is irrelevant, say so."
    ),
    "aggregate_caption": (
        "The following are captions of sequential frames (index = temporal "
        "order) from one video. Write a single coherent description of the "
        "video, preserving key details and order of events:\n{captions}"
    ),
    "aggregate_qa": (
        "The following are per-frame answers about one video, in temporal "
        "order:\n{captions}\nUsing them, answer concisely: {question}"
    ),
}


def render(template: str, **values: str | None) -> str:
    """Substitute {placeholders}; unknown or unsupplied names raise."""
    def substitute(match: re.Match) -> str:
        name = match.group(1)
        if name not in values or values[name] is None:
            raise TemplateError(f"template names {{{name}}} but no value was supplied")
        return str(values[name])

    return _PLACEHOLDER.sub(substitute, template)


def prompt_defaults(overrides: dict[str, str] | None = None) -> dict[str, str]:
    """Shipped defaults with any config-file overrides applied."""
    prompts = dict(DEFAULT_PROMPTS)
    if overrides:
        unknown = set(overrides) - set(DEFAULT_PROMPTS) - {"judge"}
        if unknown:
            raise TemplateError(f"unknown prompt keys in config: {sorted(unknown)}")
        prompts.update(overrides)
    return prompts
