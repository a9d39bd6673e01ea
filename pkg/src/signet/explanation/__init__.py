"""
explanation prompts an instruction-tuned LLM for signed pair rationales
and summarizes them per pair
"""
