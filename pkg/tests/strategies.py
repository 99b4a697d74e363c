from hypothesis import strategies as st

from rzsynth.cliffordt import ALPHABET
from rzsynth.ring import ZOmega, ZSqrt2

ints = st.integers(-10**6, 10**6)
small = st.integers(-20, 20)

zomega = st.builds(ZOmega, ints, ints, ints, ints)
zsqrt2 = st.builds(ZSqrt2, ints, ints)
words = st.text(alphabet=ALPHABET, max_size=40)
