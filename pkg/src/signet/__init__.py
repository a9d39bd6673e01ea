"""
Signet turns a news corpus into a sequence of signed business networks.
Organizations are extracted and linked with remote foundation models
(named entity recognition, entailment based zero-shot classification and
instruction-tuned LLMs), their pairwise relationships are classified and
explained, and the resulting observations are aggregated into windowed
signed networks that can be diffed and analysed for structural balance.
"""
