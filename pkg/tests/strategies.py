"""Hypothesis strategies for exact rationals, vectors and sequences."""

from fractions import Fraction

from hypothesis import strategies as st

from latlim.seqlat import EPSeq

rats = st.builds(Fraction, st.integers(-12, 12), st.sampled_from([1, 2, 3, 4]))
pos_rats = st.builds(Fraction, st.integers(0, 12), st.sampled_from([1, 2, 3, 4]))


def vectors(n, elements=rats):
    return st.tuples(*[elements] * n)


def epseqs(elements=rats, max_prefix=5, max_period=3):
    return st.builds(
        EPSeq.of,
        st.lists(elements, max_size=max_prefix),
        st.lists(elements, min_size=1, max_size=max_period),
    )


def finite_seqs(elements=rats, max_len=6):
    return st.builds(EPSeq.finite, st.lists(elements, max_size=max_len))


def matrices(n_out, n_in, values=(Fraction(0), Fraction(1, 2), Fraction(1))):
    return st.tuples(*[st.tuples(*[st.sampled_from(values)] * n_in)] * n_out)
