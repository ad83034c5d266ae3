from duhive.quench import correlators, growth, states
