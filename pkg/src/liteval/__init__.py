"""Literary machine-translation evaluation toolkit.

Submodules:

- ``model``: domain types for texts, systems, evaluators, and judgments
- ``corpus``: on-disk formats, loading/validation, statistics
- ``scoring``: guided-error scores, scaling, combination, system rankings
- ``agreement``: inter-annotator statistics (tau, kappa, span match)
- ``adequacy``: human-vs-machine preference analysis
- ``judge``: chat-model judge templates, parsing, caching, meta-evaluation
- ``textstats``: tree-kernel syntactic similarity and lexical overlap
- ``service``: annotation task HTTP service
- ``datagen``: deterministic demo corpus generator
"""

__version__ = "0.1.0"
