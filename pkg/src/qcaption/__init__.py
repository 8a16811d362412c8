"""Late-fusion video captioning and Q&A.

A video is captioned by extracting representative frames, captioning each
frame with an image-and-text model under one constant prompt, concatenating
the captions with temporal indexes, and aggregating them with a text model.
The package also ships the evaluation machinery (consensus n-gram caption
metric, LLM-judge Q&A scoring), benchmark manifest tooling, a resumable
evaluation harness, and an interactive REST service.
"""

__version__ = "0.1.0"
