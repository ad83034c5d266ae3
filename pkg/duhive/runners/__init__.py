from duhive.runners import jobs, report
