from duhive.membrane import influence, partition, tension
