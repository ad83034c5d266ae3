from duhive.opdyn import lctm, otoc, staircase, tripartite
