from duhive.analysis import entangling, hierarchy
