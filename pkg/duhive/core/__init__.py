from duhive.core import networks, tensors
