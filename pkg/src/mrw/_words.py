"""Select the word-rewriting kernel: compiled if built, else pure Python."""

try:
    from mrw import _fastwords as kernel
except ImportError:  # extension not built
    from mrw import _purewords as kernel

IMPL = kernel.IMPL
occurrences = kernel.occurrences
successors = kernel.successors
normal_form_steps = kernel.normal_form_steps
