"""
The continued-fraction algorithm α_{n+1} = 1/(α_n - ⌊α_n⌋) and the
finiteness certificates built on top of it.
"""
