"""
异常定义模块
所有领域错误均继承自 KeyRateError，命令行据此映射退出码
"""


class KeyRateError(Exception):
    """密钥率引擎的基础异常"""

    kind = "keyrate"


class DomainError(KeyRateError, ValueError):
    """参数超出定义域（如 V < 1、T 不在 [0, 1] 内）"""

    kind = "domain"


class CovarianceError(DomainError):
    """协方差矩阵不满足物理条件"""

    kind = "covariance"


class UnsupportedSpecError(KeyRateError, ValueError):
    """请求的协议组合没有对应的公式"""

    kind = "unsupported"


class NoRootError(KeyRateError):
    """阈值搜索区间内密钥率不变号"""

    kind = "no-root"


class DegenerateInputError(KeyRateError, ValueError):
    """回归自变量方差为零"""

    kind = "degenerate"


class ResourceError(KeyRateError):
    """样本数超过配置上限"""

    kind = "resource"
