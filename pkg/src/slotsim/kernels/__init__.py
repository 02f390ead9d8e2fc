from .builder import Prog, TARGETS, AsmError
from .suite import Kernel, KERNELS, build_kernel, kernel_names, f32

__all__ = ["Prog", "TARGETS", "AsmError",
           "Kernel", "KERNELS", "build_kernel", "kernel_names", "f32"]
